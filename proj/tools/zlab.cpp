// Command line front end: point evaluations, factorization runs, family
// crossbreeding, verification, and grid scans.  Exit codes: 0 success,
// 2 verification failure, 1 usage or domain error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zlab/harness.hpp"
#include "zlab/zcore.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::vector<std::string> family;
    std::vector<double> grid;
    double U = -1.0;  // <0 means "not set"
    std::vector<int> orders;
    int k0 = -1;
    std::string offset;
    std::string mode;
    double tol = -1.0;
    double quadrature_tol = -1.0;
    std::string cache_path;
    std::string report_path;
    double t = 0.0;
};

void add_run_options(CLI::App* sub, CliArgs& a, bool multi_family) {
    sub->add_option("--config", a.config_path, "JSON config file (CLI overrides)");
    auto* fam = sub->add_option("--f,--family", a.family, "function DSL text");
    if (!multi_family) fam->expected(1);
    sub->add_option("--L,--grid", a.grid, "base values (L for modes L/piL)");
    sub->add_option("--U", a.U, "segment length");
    sub->add_option("--k", a.orders, "reverse-iteration orders k_m");
    sub->add_option("--k0", a.k0, "order cap");
    sub->add_option("--offset", a.offset, "T|L|piL");
    sub->add_option("--mode", a.mode, "exact|zeta|both");
    sub->add_option("--tol", a.tol, "exact-mode verification tolerance");
    sub->add_option("--qtol", a.quadrature_tol, "quadrature tolerance");
    sub->add_option("--cache", a.cache_path, "ladder checkpoint cache file");
    sub->add_option("--report", a.report_path, "JSON report output path");
}

zlab::RunConfig build_config(const CliArgs& a) {
    zlab::RunConfig cfg;
    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in) throw zlab::validation_error("cannot open config: " + a.config_path);
        cfg = zlab::config_from_json(zlab::ojson::parse(in));
    }
    if (!a.family.empty()) cfg.family = a.family;
    if (!a.grid.empty()) cfg.grid = a.grid;
    if (a.U >= 0.0) cfg.U = a.U;
    if (!a.orders.empty()) cfg.orders = a.orders;
    if (a.k0 > 0) cfg.k0 = a.k0;
    if (!a.offset.empty()) cfg.offset = zlab::offset_from_string(a.offset);
    if (!a.mode.empty()) cfg.mode = a.mode;
    if (a.tol > 0.0) cfg.tol = a.tol;
    if (a.quadrature_tol > 0.0) cfg.quadrature_tol = a.quadrature_tol;
    if (!a.cache_path.empty()) cfg.cache_path = a.cache_path;
    if (!a.report_path.empty()) cfg.report_path = a.report_path;
    return cfg;
}

zlab::Ladder::Params ladder_params(const zlab::RunConfig& cfg) {
    zlab::Ladder::Params p;
    p.quadrature_tol = cfg.quadrature_tol;
    return p;
}

void maybe_load_cache(zlab::Ladder& ladder, const zlab::RunConfig& cfg) {
    if (!cfg.cache_path.empty()) {
        std::ifstream probe(cfg.cache_path);
        if (probe.good()) ladder.load_cache(cfg.cache_path);
    }
}

void maybe_save_cache(const zlab::Ladder& ladder, const zlab::RunConfig& cfg) {
    if (!cfg.cache_path.empty()) ladder.save_cache(cfg.cache_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"critical-line factorization toolkit"};
    app.require_subcommand(1);
    CliArgs a;

    auto* cmd_z = app.add_subcommand("z", "evaluate Z(t) and |zeta(1/2+it)|^2");
    cmd_z->add_option("--t", a.t, "height")->required();

    auto* cmd_ladder = app.add_subcommand("ladder", "evaluate J, phi1, Ztilde^2");
    cmd_ladder->add_option("--t", a.t, "height")->required();
    cmd_ladder->add_option("--qtol", a.quadrature_tol, "quadrature tolerance");
    cmd_ladder->add_option("--cache", a.cache_path, "checkpoint cache file");

    auto* cmd_fact = app.add_subcommand("factorize", "run one factorization formula");
    add_run_options(cmd_fact, a, /*multi_family=*/false);

    auto* cmd_cross = app.add_subcommand("crossbreed", "eliminate externals over a family");
    add_run_options(cmd_cross, a, true);

    auto* cmd_verify = app.add_subcommand("verify", "crossbreed and enforce tolerances");
    add_run_options(cmd_verify, a, true);

    auto* cmd_scan = app.add_subcommand("scan", "enumerate bound instances over a grid");
    add_run_options(cmd_scan, a, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_z->parsed()) {
            double z = zlab::hardy_z(a.t);
            std::printf("Z(%.17g) = %.15g\n", a.t, z);
            std::printf("|zeta(1/2+it)|^2 = %.15g\n", zlab::zeta_mod_sq_half(a.t));
            return 0;
        }
        if (cmd_ladder->parsed()) {
            zlab::Ladder::Params p;
            if (a.quadrature_tol > 0.0) p.quadrature_tol = a.quadrature_tol;
            zlab::Ladder ladder(p);
            if (!a.cache_path.empty()) {
                std::ifstream probe(a.cache_path);
                if (probe.good()) ladder.load_cache(a.cache_path);
            }
            std::printf("J(%.17g) = %.15g\n", a.t, ladder.hl_integral(a.t));
            std::printf("phi1(%.17g) = %.15g\n", a.t, ladder.phi1(a.t));
            std::printf("Ztilde^2(%.17g) = %.15g\n", a.t, ladder.z_tilde_sq(a.t));
            if (!a.cache_path.empty()) ladder.save_cache(a.cache_path);
            return 0;
        }

        zlab::RunConfig cfg = build_config(a);
        cfg.validate();
        zlab::Ladder ladder(ladder_params(cfg));
        maybe_load_cache(ladder, cfg);

        if (cmd_fact->parsed()) {
            zlab::ojson rep = zlab::run_factorize(cfg, ladder);
            std::cout << rep.dump(2) << "\n";
            maybe_save_cache(ladder, cfg);
            return 0;
        }
        if (cmd_cross->parsed()) {
            zlab::ojson rep = zlab::run_crossbreed(cfg, ladder);
            std::cout << rep.dump(2) << "\n";
            maybe_save_cache(ladder, cfg);
            return 0;
        }
        if (cmd_verify->parsed()) {
            bool ok = false;
            zlab::ojson rep = zlab::run_verify(cfg, ladder, ok);
            std::cout << rep.dump(2) << "\n";
            maybe_save_cache(ladder, cfg);
            return ok ? 0 : 2;
        }
        if (cmd_scan->parsed()) {
            bool ok = false;
            zlab::ojson rep = zlab::run_scan(cfg, ladder, ok);
            std::cout << rep.dump(2) << "\n";
            maybe_save_cache(ladder, cfg);
            return ok ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
