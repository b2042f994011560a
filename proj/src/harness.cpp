#include "zlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace zlab {

void RunConfig::validate() const {
    if (family.empty()) throw validation_error("config: at least one family member");
    if (!(U > 0.0)) throw validation_error("config: U must be positive");
    if (k0 < 1) throw validation_error("config: k0 must be >= 1");
    for (int k : orders)
        if (k < 1 || k > k0)
            throw validation_error("config: orders must satisfy 1 <= k <= k0");
    if (mode != "exact" && mode != "zeta" && mode != "both")
        throw validation_error("config: mode must be exact|zeta|both");
    if (!(tol > 0.0)) throw validation_error("config: tol must be positive");
}

OffsetMode offset_from_string(const std::string& s) {
    if (s == "T") return OffsetMode::T;
    if (s == "L") return OffsetMode::L;
    if (s == "piL") return OffsetMode::PiL;
    throw validation_error("config: offset must be T|L|piL");
}

std::string offset_to_string(OffsetMode m) {
    switch (m) {
        case OffsetMode::T: return "T";
        case OffsetMode::L: return "L";
        case OffsetMode::PiL: return "piL";
    }
    return "?";
}

RunConfig config_from_json(const ojson& j) {
    RunConfig cfg;
    if (j.contains("family")) cfg.family = j["family"].get<std::vector<std::string>>();
    if (j.contains("grid")) cfg.grid = j["grid"].get<std::vector<double>>();
    if (j.contains("U")) cfg.U = j["U"].get<double>();
    if (j.contains("orders")) cfg.orders = j["orders"].get<std::vector<int>>();
    if (j.contains("k0")) cfg.k0 = j["k0"].get<int>();
    if (j.contains("offset")) cfg.offset = offset_from_string(j["offset"].get<std::string>());
    if (j.contains("mode")) cfg.mode = j["mode"].get<std::string>();
    if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
    if (j.contains("quadrature_tol")) cfg.quadrature_tol = j["quadrature_tol"].get<double>();
    if (j.contains("a_cap")) cfg.a_cap = j["a_cap"].get<double>();
    if (j.contains("cache")) cfg.cache_path = j["cache"].get<std::string>();
    if (j.contains("report")) cfg.report_path = j["report"].get<std::string>();
    return cfg;
}

double zeta_residual_band(double T) {
    double lt = std::log(T);
    return 5.0 * std::log(lt) / lt;
}

ojson factorization_to_json(const FactorizationData& d) {
    ojson j;
    j["function"] = print_function(d.f);
    j["base"] = d.seg.base;
    j["U"] = d.seg.U;
    j["offset_mode"] = offset_to_string(d.seg.mode);
    j["k"] = d.k;
    j["alpha"] = d.alpha;
    j["beta"] = d.beta;
    ojson segs = ojson::array();
    for (const Interval& s : d.segments) segs.push_back({s.lo, s.hi});
    j["segments"] = segs;
    j["stage_A"] = d.stage_A;
    j["stage_B"] = d.stage_B;
    j["H_value"] = d.H_value;
    return j;
}

ojson report_preamble(const RunConfig& cfg, const Ladder& ladder) {
    ojson j;
    j["tolerance_exact"] = cfg.tol;
    j["quadrature_tol"] = ladder.params().quadrature_tol;
    j["ladder_c"] = ladder.params().c;
    j["ladder_c0"] = ladder.params().c0;
    j["offset_mode"] = offset_to_string(cfg.offset);
    j["U"] = cfg.U;
    return j;
}

void write_report(const ojson& report, const std::string& path) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw cache_error("cannot write report: " + path);
    out << report.dump(2) << "\n";
}

namespace {

bool has_cos2(const FunctionExpr& f) {
    for (const Term& t : f.terms)
        if (t.kind == AtomKind::Cos2) return true;
    return false;
}

const char* kCos2Note =
    "note: the mean integral of cos2 over one segment is "
    "1/2 + (1/2)(sinU/U)cosU by direct integration; statements of the "
    "corresponding closed form sometimes carry a minus sign, which is "
    "inconsistent with the additive hybrid identity; the derived '+' sign "
    "is used throughout.";

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + m, v.end());
    double hi = v[m];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + m - 1, v.end());
    return 0.5 * (hi + v[m - 1]);
}

struct BoundSet {
    // FactorizationData per (formula index, k), computed lazily
    std::map<std::pair<int, int>, FactorizationData> cache;

    const FactorizationData& get(const FunctionExpr& f, const SegmentSpec& seg,
                                 int idx, int k, const Ladder& ladder) {
        auto key = std::make_pair(idx, k);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, apply_H(f, seg, k, ladder)).first;
        return it->second;
    }
};

}  // namespace

ojson run_factorize(const RunConfig& cfg, const Ladder& ladder) {
    cfg.validate();
    if (cfg.family.size() != 1)
        throw validation_error("factorize: exactly one family member expected");
    FunctionExpr f = parse_function(cfg.family[0]);
    std::vector<int> ks = cfg.orders.empty() ? std::vector<int>{1} : cfg.orders;

    ojson report = report_preamble(cfg, ladder);
    report["command"] = "factorize";
    report["function"] = print_function(f);
    report["external"] = print_external(mean_integral_symbolic(f));
    report["structural_factor"] = structural_factor(f).display;
    if (has_cos2(f)) report["note"] = kCos2Note;

    ojson runs = ojson::array();
    for (double base : cfg.grid) {
        for (int k : ks) {
            SegmentSpec seg = SegmentSpec::make(base, cfg.U, cfg.offset, cfg.a_cap);
            FactorizationData d = apply_H(f, seg, k, ladder);
            ojson r = factorization_to_json(d);
            if (cfg.mode != "zeta") {
                EvalReport e = factorization_eval(d, EvalMode::Exact, ladder);
                r["exact"] = {{"lhs_product", e.lhs_product},
                              {"rhs", e.rhs},
                              {"residual", e.residual}};
            }
            if (cfg.mode != "exact") {
                EvalReport e = factorization_eval(d, EvalMode::Zeta, ladder);
                r["zeta"] = {{"lhs_product", e.lhs_product},
                             {"rhs", e.rhs},
                             {"residual", e.residual},
                             {"band", zeta_residual_band(seg.base)}};
            }
            runs.push_back(r);
        }
    }
    report["runs"] = runs;
    write_report(report, cfg.report_path);
    return report;
}

namespace {

// Bind a certificate over one base: one instance per order tuple.
// `tuples` maps participant id -> k.
void bind_and_verify(const HybridFormula& cert,
                     const std::vector<FactorizationFormula>& formulas,
                     const SegmentSpec& seg, const std::vector<int>& ks,
                     BoundSet& bound, const Ladder& ladder, const RunConfig& cfg,
                     ojson& instance) {
    std::map<int, FactorizationData> binding;
    for (std::size_t i = 0; i < formulas.size(); ++i) {
        const auto& ff = formulas[i];
        auto pos = std::find(cert.participants.begin(), cert.participants.end(), ff.id);
        if (pos == cert.participants.end()) continue;
        std::size_t pi = pos - cert.participants.begin();
        binding.emplace(ff.id, bound.get(ff.f, seg, static_cast<int>(i), ks[pi], ladder));
    }
    ojson korders = ojson::array();
    for (int k : ks) korders.push_back(k);
    instance["orders"] = korders;
    if (cfg.mode != "zeta")
        instance["exact_residual"] = verify_hybrid(cert, binding, EvalMode::Exact, ladder);
    if (cfg.mode != "exact")
        instance["zeta_residual"] = verify_hybrid(cert, binding, EvalMode::Zeta, ladder);
}

ojson verdict_to_json(const Verdict& v) {
    ojson j;
    j["kindred"] = v.kindred;
    if (v.certificate) j["certificate"] = to_json(*v.certificate);
    j["stages"] = v.stages;
    if (!v.reason.empty()) j["reason"] = v.reason;
    return j;
}

}  // namespace

ojson run_crossbreed(const RunConfig& cfg, const Ladder& ladder) {
    cfg.validate();
    std::vector<FunctionExpr> fs;
    for (const auto& txt : cfg.family) fs.push_back(parse_function(txt));
    Verdict v = kindred_verdict(fs);

    ojson report = report_preamble(cfg, ladder);
    report["command"] = "crossbreed";
    ojson fams = ojson::array();
    for (const auto& f : fs) fams.push_back(print_function(f));
    report["family"] = fams;
    report["verdict"] = verdict_to_json(v);
    for (const auto& f : fs)
        if (has_cos2(f)) { report["note"] = kCos2Note; break; }

    if (v.kindred && !cfg.grid.empty()) {
        std::vector<FactorizationFormula> formulas;
        for (std::size_t i = 0; i < fs.size(); ++i)
            formulas.push_back(make_formula(static_cast<int>(i + 1), fs[i]));
        const HybridFormula& cert = *v.certificate;
        std::vector<int> ks(cert.participants.size(), 1);
        for (std::size_t i = 0; i < ks.size() && i < cfg.orders.size(); ++i)
            ks[i] = cfg.orders[i];
        ojson bases = ojson::array();
        for (double base : cfg.grid) {
            ojson entry;
            entry["base"] = base;
            try {
                SegmentSpec seg = SegmentSpec::make(base, cfg.U, cfg.offset, cfg.a_cap);
                entry["T"] = seg.base;
                BoundSet bound;
                ojson inst;
                bind_and_verify(cert, formulas, seg, ks, bound, ladder, cfg, inst);
                entry["instance"] = inst;
            } catch (const std::exception& e) {
                entry["error"] = e.what();
            }
            bases.push_back(entry);
        }
        report["bindings"] = bases;
    }
    write_report(report, cfg.report_path);
    return report;
}

ojson run_verify(const RunConfig& cfg, const Ladder& ladder, bool& ok) {
    ojson report = run_crossbreed(cfg, ladder);
    report["command"] = "verify";
    ok = report["verdict"]["kindred"].get<bool>();
    if (ok && report.contains("bindings")) {
        for (const auto& entry : report["bindings"]) {
            if (entry.contains("error")) { ok = false; continue; }
            const auto& inst = entry["instance"];
            if (inst.contains("exact_residual") &&
                inst["exact_residual"].get<double>() > cfg.tol)
                ok = false;
            if (inst.contains("zeta_residual") &&
                inst["zeta_residual"].get<double>() >
                    zeta_residual_band(entry["T"].get<double>()))
                ok = false;
        }
    }
    report["ok"] = ok;
    write_report(report, cfg.report_path);
    return report;
}

ojson run_scan(const RunConfig& cfg, const Ladder& ladder, bool& ok) {
    cfg.validate();
    std::vector<FunctionExpr> fs;
    for (const auto& txt : cfg.family) fs.push_back(parse_function(txt));
    Verdict v = kindred_verdict(fs);

    ojson report = report_preamble(cfg, ladder);
    report["command"] = "scan";
    ojson fams = ojson::array();
    for (const auto& f : fs) fams.push_back(print_function(f));
    report["family"] = fams;
    report["k0"] = cfg.k0;
    report["verdict"] = verdict_to_json(v);
    ok = v.kindred;
    if (!v.kindred) {
        write_report(report, cfg.report_path);
        return report;
    }

    std::vector<FactorizationFormula> formulas;
    for (std::size_t i = 0; i < fs.size(); ++i)
        formulas.push_back(make_formula(static_cast<int>(i + 1), fs[i]));
    const HybridFormula& cert = *v.certificate;
    const std::size_t np = cert.participants.size();

    // all order tuples (k_1,...,k_np) in [1, k0]^np, canonical order
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur(np, 1);
    for (;;) {
        tuples.push_back(cur);
        std::size_t i = 0;
        while (i < np && ++cur[i] > cfg.k0) cur[i++] = 1;
        if (i == np) break;
    }
    report["instances_per_base"] = static_cast<int>(tuples.size());

    std::vector<std::pair<double, double>> plot_exact, plot_zeta;
    std::map<int, std::vector<double>> decade_exact, decade_zeta;
    ojson bases = ojson::array();
    for (double base : cfg.grid) {
        ojson entry;
        entry["base"] = base;
        try {
            SegmentSpec seg = SegmentSpec::make(base, cfg.U, cfg.offset, cfg.a_cap);
            entry["T"] = seg.base;
            double band = zeta_residual_band(seg.base);
            entry["zeta_band"] = band;
            BoundSet bound;
            ojson insts = ojson::array();
            int decade = static_cast<int>(std::floor(std::log10(seg.base)));
            for (const auto& ks : tuples) {
                ojson inst;
                bind_and_verify(cert, formulas, seg, ks, bound, ladder, cfg, inst);
                if (inst.contains("exact_residual")) {
                    double r = inst["exact_residual"].get<double>();
                    plot_exact.emplace_back(seg.base, r);
                    decade_exact[decade].push_back(r);
                    if (r > cfg.tol) ok = false;
                }
                if (inst.contains("zeta_residual")) {
                    double r = inst["zeta_residual"].get<double>();
                    plot_zeta.emplace_back(seg.base, r);
                    decade_zeta[decade].push_back(r);
                    if (r > band) ok = false;
                }
                insts.push_back(inst);
            }
            entry["instances"] = insts;
        } catch (const std::exception& e) {
            entry["error"] = e.what();
            ok = false;
        }
        bases.push_back(entry);
    }
    report["bases"] = bases;

    ojson trend = ojson::array();
    for (const auto& [dec, vals] : decade_exact) {
        ojson t;
        t["decade"] = dec;
        t["median_exact"] = median(vals);
        auto it = decade_zeta.find(dec);
        if (it != decade_zeta.end()) t["median_zeta"] = median(it->second);
        trend.push_back(t);
    }
    report["trend"] = trend;
    report["ok"] = ok;

    if (!cfg.report_path.empty()) {
        auto write_plot = [&](const std::string& suffix,
                              const std::vector<std::pair<double, double>>& rows) {
            std::ofstream out(cfg.report_path + suffix);
            for (const auto& [b, r] : rows) out << b << " " << r << "\n";
        };
        if (!plot_exact.empty()) write_plot(".exact.dat", plot_exact);
        if (!plot_zeta.empty()) write_plot(".zeta.dat", plot_zeta);
    }
    write_report(report, cfg.report_path);
    return report;
}

}  // namespace zlab
