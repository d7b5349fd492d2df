#ifndef OPQ_COMMANDS_HPP
#define OPQ_COMMANDS_HPP

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "opq/io.hpp"
#include "opq/verify.hpp"

namespace opq {

/// Effective run configuration. Decimal parameters stay strings until a
/// command parses them at the configured working precision.
struct RunConfig {
    long precision_bits = 256;
    std::string alpha = "0.5";
    std::string beta = "2.5";
    std::string M = "1";
    std::string N = "1";
    std::string a = "-1";
    std::optional<long> n_max;  // command-specific default when absent
    std::string format = "csv";
    std::string out;  // empty = stdout (figure falls back to <which>.csv)
    std::uint64_t seed = 12345;
    long k = 0;
    long s = 0;
    long j = 0;
    long l = 0;
    std::string kind;   // scan
    std::string which;  // figure
    std::string table;  // table

    void validate() const {
        if (precision_bits < 64)
            throw std::domain_error("config: precision_bits must be >= 64");
        if (n_max && *n_max < 1) throw std::domain_error("config: n_max must be >= 1");
        if (format != "csv" && format != "json")
            throw std::domain_error("config: format must be csv or json");
    }
};

/// Layer a JSON config file under values not yet set on the command line.
/// Call before applying CLI overrides: flags > file > defaults.
inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::domain_error("config: cannot open file " + path);
    ordered_json j = ordered_json::parse(f, nullptr, true, true);
    if (j.contains("precision_bits")) cfg.precision_bits = j["precision_bits"].get<long>();
    if (j.contains("alpha")) cfg.alpha = j["alpha"].get<std::string>();
    if (j.contains("beta")) cfg.beta = j["beta"].get<std::string>();
    if (j.contains("M")) cfg.M = j["M"].get<std::string>();
    if (j.contains("N")) cfg.N = j["N"].get<std::string>();
    if (j.contains("a")) cfg.a = j["a"].get<std::string>();
    if (j.contains("n_max")) cfg.n_max = j["n_max"].get<long>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("k")) cfg.k = j["k"].get<long>();
    if (j.contains("s")) cfg.s = j["s"].get<long>();
    if (j.contains("j")) cfg.j = j["j"].get<long>();
    if (j.contains("l")) cfg.l = j["l"].get<long>();
    if (j.contains("kind")) cfg.kind = j["kind"].get<std::string>();
    if (j.contains("which")) cfg.which = j["which"].get<std::string>();
    if (j.contains("table")) cfg.table = j["table"].get<std::string>();
}

inline ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["precision_bits"] = cfg.precision_bits;
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["M"] = cfg.M;
    j["N"] = cfg.N;
    j["a"] = cfg.a;
    if (cfg.n_max) j["n_max"] = *cfg.n_max;
    j["format"] = cfg.format;
    j["out"] = cfg.out;
    j["seed"] = cfg.seed;
    j["k"] = cfg.k;
    j["s"] = cfg.s;
    j["j"] = cfg.j;
    j["l"] = cfg.l;
    if (!cfg.kind.empty()) j["kind"] = cfg.kind;
    if (!cfg.which.empty()) j["which"] = cfg.which;
    if (!cfg.table.empty()) j["table"] = cfg.table;
    return j;
}

namespace detail {

inline void emit(const RunConfig& cfg, const std::string& csv, const ordered_json& json,
                 const std::string& path) {
    std::string content = cfg.format == "json" ? json.dump(2) + "\n" : csv;
    if (path.empty())
        std::cout << content;
    else
        write_text_file(path, content);
}

inline JacobiParams parse_jacobi(const RunConfig& cfg) {
    return JacobiParams{Real(cfg.alpha), Real(cfg.beta)};
}

inline SobolevParams parse_sobolev(const RunConfig& cfg) {
    return SobolevParams{Real(cfg.M), Real(cfg.N), Real(cfg.a)};
}

inline void require_a_minus1(const RunConfig& cfg) {
    if (Real(cfg.a) != Real(-1))
        throw std::domain_error("a = -1 required (closed-form Jacobi instance)");
}

}  // namespace detail

/// Runs the identity/orthogonality suites at the configured parameters.
/// Returns 0 when every case passes, 1 otherwise.
inline int cmd_verify(const RunConfig& cfg) {
    cfg.validate();
    PrecisionScope prec(cfg.precision_bits);
    detail::require_a_minus1(cfg);
    JacobiParams p = detail::parse_jacobi(cfg);
    if (!(p.beta > Real(1))) throw std::domain_error("beta > 1 required for the gg suites");
    Real tol = Real::pow2(-(cfg.precision_bits / 2));
    VerifyContext ctx = make_verify_context(p, Real(cfg.M), Real(cfg.N),
                                            cfg.n_max.value_or(30), tol, cfg.seed);
    auto reports = run_verify_suites(ctx);
    std::size_t digits = sig_digits_for_bits(cfg.precision_bits);
    detail::emit(cfg, report_csv(reports, digits), report_json(reports, digits), cfg.out);
    for (const auto& r : reports)
        if (!r.overall_pass) return 1;
    return 0;
}

inline ConvergenceTable run_scan(const RunConfig& cfg, const std::string& kind, long n_max) {
    std::vector<long> grid = geometric_grid(n_max);
    if (kind == "gamma") return gamma_ratio_scan(cfg.k, cfg.l, grid);
    if (kind == "endpoint") return endpoint_limit_scan(detail::parse_jacobi(cfg), cfg.k, grid);
    if (kind == "norm_limit") return norm_limit_scan(detail::parse_jacobi(cfg), grid);
    if (kind == "kernel")
        return kernel_limit_scan(detail::parse_jacobi(cfg), cfg.k, cfg.s, grid);
    if (kind == "deriv_ratio")
        return derivative_ratio_scan(detail::parse_jacobi(cfg), detail::parse_sobolev(cfg), cfg.j,
                                     grid);
    if (kind == "norm_ratio")
        return norm_ratio_scan(detail::parse_jacobi(cfg), detail::parse_sobolev(cfg), grid);
    throw std::domain_error("unknown scan kind: " + kind);
}

inline int cmd_scan(const RunConfig& cfg) {
    cfg.validate();
    PrecisionScope prec(cfg.precision_bits);
    ConvergenceTable t = run_scan(cfg, cfg.kind, cfg.n_max.value_or(4096));
    fit_decay(t);
    std::size_t digits = sig_digits_for_bits(cfg.precision_bits);
    detail::emit(cfg, table_csv(t, digits), table_json(t, digits), cfg.out);
    return 0;
}

/// Figure replications: fig1a is the derivative-ratio scan at alpha=0,
/// beta=1, j=2, M=N=1; fig1b the norm-ratio scan at the same parameters.
/// Writes the CSV plus a <out>.meta.json sidecar.
inline int cmd_figure(const RunConfig& cfg) {
    cfg.validate();
    PrecisionScope prec(cfg.precision_bits);
    if (cfg.which != "fig1a" && cfg.which != "fig1b")
        throw std::domain_error("figure: --which must be fig1a or fig1b");
    RunConfig fig = cfg;
    fig.alpha = "0";
    fig.beta = "1";
    fig.M = "1";
    fig.N = "1";
    fig.a = "-1";
    fig.j = 2;
    std::string kind = cfg.which == "fig1a" ? "deriv_ratio" : "norm_ratio";
    ConvergenceTable t = run_scan(fig, kind, cfg.n_max.value_or(4096));
    fit_decay(t);
    std::size_t digits = sig_digits_for_bits(cfg.precision_bits);
    std::string out = cfg.out.empty() ? cfg.which + ".csv" : cfg.out;
    write_text_file(out, table_csv(t, digits));

    ordered_json meta;
    meta["figure"] = cfg.which;
    meta["kind"] = kind;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : t.meta) params[k] = v;
    meta["params"] = params;
    meta["precision_bits"] = cfg.precision_bits;
    meta["rows"] = t.rows.size();
    meta["limit"] = format_real(t.rows.back().limit, digits);
    if (t.decay_exponent)
        meta["decay_exponent"] = format_real(*t.decay_exponent, digits);
    else
        meta["decay_exponent"] = nullptr;
    write_text_file(out + ".meta.json", meta.dump(2) + "\n");
    return 0;
}

/// Coefficient tables with a provenance column marking where the small-n
/// projection fallback replaces the generic-n closed form.
inline int cmd_table(const RunConfig& cfg) {
    cfg.validate();
    PrecisionScope prec(cfg.precision_bits);
    long n_max = cfg.n_max.value_or(30);
    std::size_t digits = sig_digits_for_bits(cfg.precision_bits);
    std::ostringstream csv;
    ordered_json rows = ordered_json::array();

    if (cfg.table == "recurrence") {
        JacobiParams p = detail::parse_jacobi(cfg);
        csv << "n,beta,gamma,provenance\n";
        for (long n = 0; n <= n_max; ++n) {
            std::string b = format_real(jacobi_beta_n(p, n), digits);
            std::string g = n >= 1 ? format_real(jacobi_gamma_n(p, n), digits) : "0";
            csv << n << ',' << b << ',' << g << ",closed_form\n";
            rows.push_back({{"n", n}, {"beta", b}, {"gamma", g}, {"provenance", "closed_form"}});
        }
    } else if (cfg.table == "gg_expansion") {
        JacobiParams p = detail::parse_jacobi(cfg);
        csv << "n,B,C,provenance\n";
        for (long n = 0; n <= n_max; ++n) {
            GGExpansion e = gg_expansion_coeffs(p, n);
            std::string b = format_real(e.B, digits), c = format_real(e.C, digits);
            csv << n << ',' << b << ',' << c << ",closed_form\n";
            rows.push_back({{"n", n}, {"B", b}, {"C", c}, {"provenance", "closed_form"}});
        }
    } else if (cfg.table == "three_term") {
        detail::require_a_minus1(cfg);
        GGSystem g = make_jacobi_gg(detail::parse_jacobi(cfg));
        csv << "n,sigma_nn,sigma_nm1,provenance\n";
        for (long n = 0; n <= n_max; ++n) {
            ThreeTerm tt = gg_three_term(g, n);
            std::string s1 = format_real(tt.sigma_nn, digits), s0 = format_real(tt.sigma_nm1, digits);
            const char* prov = to_string(tt.prov);
            csv << n << ',' << s1 << ',' << s0 << ',' << prov << '\n';
            rows.push_back({{"n", n}, {"sigma_nn", s1}, {"sigma_nm1", s0}, {"provenance", prov}});
        }
    } else if (cfg.table == "five_term") {
        detail::require_a_minus1(cfg);
        GGSystem g = make_jacobi_gg(detail::parse_jacobi(cfg));
        csv << "n,a_pp1,a_p0,a_m1,a_m2,provenance\n";
        for (long n = 0; n <= n_max; ++n) {
            FiveTerm ft = gg_five_term(g, n);
            std::string c1 = format_real(ft.a_pp1, digits), c2 = format_real(ft.a_p0, digits),
                        c3 = format_real(ft.a_m1, digits), c4 = format_real(ft.a_m2, digits);
            const char* prov = to_string(ft.prov);
            csv << n << ',' << c1 << ',' << c2 << ',' << c3 << ',' << c4 << ',' << prov << '\n';
            rows.push_back({{"n", n},
                            {"a_pp1", c1},
                            {"a_p0", c2},
                            {"a_m1", c3},
                            {"a_m2", c4},
                            {"provenance", prov}});
        }
    } else if (cfg.table == "connection") {
        detail::require_a_minus1(cfg);
        GGSystem g = make_jacobi_gg(detail::parse_jacobi(cfg));
        csv << "n,sigma_pp1,sigma_p0,provenance\n";
        for (long n = 0; n <= n_max; ++n) {
            BaseConnection bc = base_to_gg_connection(g, n);
            std::string s1 = format_real(bc.s_pp1, digits), s0 = format_real(bc.s_p0, digits);
            const char* prov = to_string(bc.prov);
            csv << n << ',' << s1 << ',' << s0 << ',' << prov << '\n';
            rows.push_back(
                {{"n", n}, {"sigma_pp1", s1}, {"sigma_p0", s0}, {"provenance", prov}});
        }
    } else if (cfg.table == "qq_connection") {
        detail::require_a_minus1(cfg);
        JacobiParams p = detail::parse_jacobi(cfg);
        GGSystem g = make_jacobi_gg(p);
        SobolevSystem sob = make_jacobi_sobolev(p, Real(cfg.M), Real(cfg.N));
        csv << "n,a_pp1,a_p0,a_m1,a_m2,provenance\n";
        for (long n = 0; n <= n_max; ++n) {
            QQConnection qc = qq_connection(sob, g, n);
            std::string c1 = format_real(qc.a_pp1, digits), c2 = format_real(qc.a_p0, digits),
                        c3 = format_real(qc.a_m1, digits), c4 = format_real(qc.a_m2, digits);
            const char* prov = to_string(qc.prov);
            csv << n << ',' << c1 << ',' << c2 << ',' << c3 << ',' << c4 << ',' << prov << '\n';
            rows.push_back({{"n", n},
                            {"a_pp1", c1},
                            {"a_p0", c2},
                            {"a_m1", c3},
                            {"a_m2", c4},
                            {"provenance", prov}});
        }
    } else {
        throw std::domain_error("unknown table kind: " + cfg.table);
    }

    ordered_json j;
    j["table"] = cfg.table;
    j["rows"] = rows;
    detail::emit(cfg, csv.str(), j, cfg.out);
    return 0;
}

}  // namespace opq

#endif
