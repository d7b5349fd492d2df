// opq: construct double-Geronimus and Sobolev-type orthogonal polynomials,
// verify their recurrence/connection identities at high precision, and emit
// convergence tables for the endpoint asymptotics.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "opq/commands.hpp"

namespace {

struct CliState {
    opq::RunConfig cfg;
    std::string config_file;
    bool dump_config = false;

    // CLI-provided values; applied over the config file.
    std::optional<long> precision_bits;
    std::optional<std::string> alpha, beta, M, N, a, format, out;
    std::optional<long> n_max, k, s, j, l;
    std::optional<std::uint64_t> seed;
};

void add_common_flags(CLI::App* cmd, CliState& st) {
    cmd->add_option("--precision-bits", st.precision_bits, "Working precision in bits (>= 64)");
    cmd->add_option("--alpha", st.alpha, "Jacobi parameter alpha (decimal string)");
    cmd->add_option("--beta", st.beta, "Jacobi parameter beta (decimal string)");
    cmd->add_option("--M", st.M, "Sobolev mass on point values");
    cmd->add_option("--N", st.N, "Sobolev mass on derivative values");
    cmd->add_option("--a", st.a, "Evaluation point (default -1)");
    cmd->add_option("--n-max", st.n_max, "Largest index n");
    cmd->add_option("--format", st.format, "Output format: csv or json");
    cmd->add_option("--out", st.out, "Output path (default stdout)");
    cmd->add_option("--seed", st.seed, "Seed for randomized property checks");
    cmd->add_option("--config", st.config_file, "JSON config file (flags take precedence)");
    cmd->add_flag("--dump-config", st.dump_config, "Print the effective config and exit");
}

void finalize(CliState& st) {
    if (!st.config_file.empty()) opq::apply_config_file(st.cfg, st.config_file);
    if (st.precision_bits) st.cfg.precision_bits = *st.precision_bits;
    if (st.alpha) st.cfg.alpha = *st.alpha;
    if (st.beta) st.cfg.beta = *st.beta;
    if (st.M) st.cfg.M = *st.M;
    if (st.N) st.cfg.N = *st.N;
    if (st.a) st.cfg.a = *st.a;
    if (st.n_max) st.cfg.n_max = *st.n_max;
    if (st.format) st.cfg.format = *st.format;
    if (st.out) st.cfg.out = *st.out;
    if (st.seed) st.cfg.seed = *st.seed;
    if (st.k) st.cfg.k = *st.k;
    if (st.s) st.cfg.s = *st.s;
    if (st.j) st.cfg.j = *st.j;
    if (st.l) st.cfg.l = *st.l;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orthogonal polynomial identity verifier and asymptotics scanner"};
    app.require_subcommand(1);
    CliState st;

    CLI::App* verify = app.add_subcommand("verify", "Run the identity verification suites");
    add_common_flags(verify, st);

    CLI::App* scan = app.add_subcommand("scan", "Emit a convergence table for one limit");
    add_common_flags(scan, st);
    scan->add_option("--kind", st.cfg.kind,
                     "gamma | endpoint | norm_limit | kernel | deriv_ratio | norm_ratio")
        ->required();
    scan->add_option("--k", st.k, "Derivative order k (gamma/endpoint/kernel scans)");
    scan->add_option("--s", st.s, "Derivative order s (kernel scan)");
    scan->add_option("--j", st.j, "Derivative order j (deriv_ratio scan)");
    scan->add_option("--l", st.l, "Second index l (gamma scan)");

    CLI::App* figure = app.add_subcommand("figure", "Emit figure data (CSV + metadata sidecar)");
    add_common_flags(figure, st);
    figure->add_option("--which", st.cfg.which, "fig1a | fig1b")->required();

    CLI::App* table = app.add_subcommand("table", "Emit coefficient tables");
    add_common_flags(table, st);
    table
        ->add_option("--what", st.cfg.table,
                     "recurrence | gg_expansion | three_term | five_term | connection | "
                     "qq_connection")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        finalize(st);
        if (st.dump_config) {
            std::cout << opq::config_json(st.cfg).dump(2) << "\n";
            return 0;
        }
        if (app.got_subcommand(verify)) return opq::cmd_verify(st.cfg);
        if (app.got_subcommand(scan)) return opq::cmd_scan(st.cfg);
        if (app.got_subcommand(figure)) return opq::cmd_figure(st.cfg);
        if (app.got_subcommand(table)) return opq::cmd_table(st.cfg);
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
