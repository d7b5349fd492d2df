#ifndef OPQ_IO_HPP
#define OPQ_IO_HPP

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "opq/asymptotics.hpp"
#include "opq/verify.hpp"

namespace opq {

using ordered_json = nlohmann::ordered_json;

/// Significant decimal digits carrying the full binary precision:
/// ceil(bits * log10(2)).
inline std::size_t sig_digits_for_bits(long bits) {
    return static_cast<std::size_t>(std::ceil(static_cast<double>(bits) * 0.30102999566398119521));
}

inline std::string format_real(const Real& v, std::size_t digits) { return v.to_decimal(digits); }

inline std::string table_csv(const ConvergenceTable& t, std::size_t digits) {
    std::ostringstream os;
    os << "n,value,limit,abs_error\n";
    for (const auto& row : t.rows)
        os << row.n << ',' << format_real(row.value, digits) << ','
           << format_real(row.limit, digits) << ',' << format_real(row.abs_error, digits) << '\n';
    return os.str();
}

inline ordered_json table_json(const ConvergenceTable& t, std::size_t digits) {
    ordered_json j;
    j["kind"] = t.kind;
    ordered_json meta = ordered_json::object();
    for (const auto& [k, v] : t.meta) meta[k] = v;
    j["meta"] = meta;
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
        ordered_json r;
        r["n"] = row.n;
        r["value"] = format_real(row.value, digits);
        r["limit"] = format_real(row.limit, digits);
        r["abs_error"] = format_real(row.abs_error, digits);
        rows.push_back(r);
    }
    j["rows"] = rows;
    if (t.decay_exponent)
        j["decay_exponent"] = format_real(*t.decay_exponent, digits);
    else
        j["decay_exponent"] = nullptr;
    return j;
}

inline std::string report_csv(const std::vector<VerificationReport>& reports,
                              std::size_t digits) {
    std::ostringstream os;
    os << "suite,case_id,residual,tolerance,pass\n";
    for (const auto& rep : reports)
        for (const auto& c : rep.cases)
            os << rep.suite << ',' << c.id << ',' << format_real(c.residual, digits) << ','
               << format_real(c.tolerance, digits) << ',' << (c.pass ? "true" : "false") << '\n';
    return os.str();
}

inline ordered_json report_json(const std::vector<VerificationReport>& reports,
                                std::size_t digits) {
    ordered_json suites = ordered_json::array();
    bool all = true;
    for (const auto& rep : reports) {
        ordered_json cases = ordered_json::array();
        for (const auto& c : rep.cases) {
            ordered_json e;
            e["case_id"] = c.id;
            e["residual"] = format_real(c.residual, digits);
            e["tolerance"] = format_real(c.tolerance, digits);
            e["pass"] = c.pass;
            cases.push_back(e);
        }
        ordered_json s;
        s["suite"] = rep.suite;
        s["overall_pass"] = rep.overall_pass;
        s["cases"] = cases;
        suites.push_back(s);
        all = all && rep.overall_pass;
    }
    ordered_json j;
    j["overall_pass"] = all;
    j["suites"] = suites;
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << content;
}

}  // namespace opq

#endif
