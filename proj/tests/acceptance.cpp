// End-to-end acceptance gate. Runs the nine release criteria and prints one
// pass/fail line per criterion; exit status is nonzero if any criterion fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "zlab/crossbreed.hpp"
#include "zlab/harness.hpp"
#include "zlab/hop.hpp"
#include "zlab/ladder.hpp"
#include "zlab/quadrature.hpp"
#include "zlab/zcore.hpp"

using namespace zlab;

namespace {

Ladder g_ladder;

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return (n % 2) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SegmentSpec trig_seg(double L, double U) {
    return SegmentSpec::make(L, U, OffsetMode::PiL);
}

SegmentSpec power_seg(double L, double U) {
    return SegmentSpec::make(L, U, OffsetMode::L, 0.9);
}

// ---------------------------------------------------------------------------

bool criterion1(std::string& detail) {
    struct Case {
        const char* f;
        bool trig;
    };
    const Case cases[] = {
        {"sin2", true},
        {"cos2", true},
        {"pow(0.5)", false},
        {"pow(0.4) + pow(0.3)", false},
    };
    double worst = 0.0;
    int n = 0;
    for (const Case& c : cases) {
        FunctionExpr f = parse_function(c.f);
        for (double L : {200.0, 1000.0, 5000.0}) {
            SegmentSpec seg = c.trig ? trig_seg(L, 1.0) : power_seg(L, 0.5);
            for (int k : {1, 2, 3}) {
                FactorizationData d = apply_H(f, seg, k, g_ladder);
                EvalReport rep = factorization_eval(d, EvalMode::Exact, g_ladder);
                worst = std::max(worst, rep.residual);
                ++n;
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "36 (f, L, k) configurations, worst exact residual %.2e", worst);
    detail = buf;
    return n == 36 && worst <= 1e-5;
}

// the three hybrid families used throughout; ids are assigned 1..n in order
std::vector<FunctionExpr> trig_family() {
    return {parse_function("sin2"), parse_function("cos2")};
}
std::vector<FunctionExpr> mult_family() {
    return {parse_function("pow(0.7)"), parse_function("pow(0.4)"),
            parse_function("pow(0.3)")};
}
std::vector<FunctionExpr> target_family() {
    return {parse_function("pow(0.4) + pow(0.3)"), parse_function("pow(0.4)"),
            parse_function("pow(0.3)")};
}

double bind_and_check(const std::vector<FunctionExpr>& fs, const SegmentSpec& seg,
                      EvalMode mode) {
    Verdict v = kindred_verdict(fs);
    if (!v.kindred) return 1e9;
    std::map<int, FactorizationData> binding;
    for (std::size_t i = 0; i < fs.size(); ++i)
        binding.emplace(static_cast<int>(i + 1), apply_H(fs[i], seg, 1, g_ladder));
    return verify_hybrid(*v.certificate, binding, mode, g_ladder);
}

bool criterion2(std::string& detail) {
    double r1 = bind_and_check(trig_family(), trig_seg(200.0, 1.0), EvalMode::Exact);
    double r2 = bind_and_check(mult_family(), power_seg(1000.0, 0.5), EvalMode::Exact);
    double r3 =
        bind_and_check(target_family(), power_seg(1000.0, 0.5), EvalMode::Exact);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "exact hybrid residuals %.2e (trig), %.2e (product), %.2e (split)",
                  r1, r2, r3);
    detail = buf;
    return r1 <= 1e-5 && r2 <= 1e-5 && r3 <= 1e-5;
}

bool criterion3(std::string& detail) {
    const double heights[] = {300.0, 3000.0, 30000.0};
    std::vector<double> med;
    int count = 0;
    bool in_band = true;
    for (double T : heights) {
        std::vector<double> residuals;
        double band = zeta_residual_band(T);
        for (const char* fs : {"sin2", "cos2"}) {
            FunctionExpr f = parse_function(fs);
            SegmentSpec seg = SegmentSpec::make(T, 1.0, OffsetMode::T);
            for (int k : {1, 2}) {
                FactorizationData d = apply_H(f, seg, k, g_ladder);
                EvalReport rep = factorization_eval(d, EvalMode::Zeta, g_ladder);
                residuals.push_back(rep.residual);
                if (rep.residual > band) in_band = false;
                ++count;
            }
        }
        med.push_back(median(residuals));
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "%d configs, median residual %.2e @300 down to %.2e @30000 "
                  "(band %.2f..%.2f)",
                  count, med.front(), med.back(), zeta_residual_band(300.0),
                  zeta_residual_band(30000.0));
    detail = buf;
    return in_band && count >= 12 && med.back() < med.front();
}

bool criterion4(std::string& detail) {
    const char* expect_trig = R"({
        "relation": {"op": "sum", "args": [
            {"op": "product", "args": [
                {"op": "f_at_alpha0", "formula": 1},
                {"op": "product_ref", "formula": 1}]},
            {"op": "product", "args": [
                {"op": "f_at_alpha0", "formula": 2},
                {"op": "product_ref", "formula": 2}]}]},
        "participants": [1, 2],
        "eliminated": ["CONST", "TRIG"],
        "complete": true,
        "shape": "additive-unit"})";
    const char* expect_mult = R"({
        "relation": {"op": "product", "args": [
            {"op": "const", "value": "91/85"},
            {"op": "inv_f_at_alpha0", "formula": 1},
            {"op": "inv_product_ref", "formula": 1},
            {"op": "f_at_alpha0", "formula": 2},
            {"op": "product_ref", "formula": 2},
            {"op": "f_at_alpha0", "formula": 3},
            {"op": "product_ref", "formula": 3}]},
        "participants": [1, 2, 3],
        "eliminated": ["U^0.7", "U^0.4", "U^0.3"],
        "complete": true,
        "shape": "multiplicative"})";
    const char* expect_target = R"({
        "relation": {"op": "product", "args": [
            {"op": "inv_f_at_alpha0", "formula": 1},
            {"op": "inv_product_ref", "formula": 1},
            {"op": "sum", "args": [
                {"op": "product", "args": [
                    {"op": "f_at_alpha0", "formula": 2},
                    {"op": "product_ref", "formula": 2}]},
                {"op": "product", "args": [
                    {"op": "f_at_alpha0", "formula": 3},
                    {"op": "product_ref", "formula": 3}]}]}]},
        "participants": [1, 2, 3],
        "eliminated": ["U^0.4", "U^0.3"],
        "complete": true,
        "shape": "additive-target"})";

    struct Case {
        std::vector<FunctionExpr> fs;
        const char* expect;
        const char* name;
    };
    Case cases[] = {
        {trig_family(), expect_trig, "additive-unit"},
        {mult_family(), expect_mult, "multiplicative"},
        {target_family(), expect_target, "additive-target"},
    };
    for (const Case& c : cases) {
        Verdict v = kindred_verdict(c.fs);
        if (!v.kindred) {
            detail = std::string("no certificate for shape ") + c.name;
            return false;
        }
        ojson got = to_json(*v.certificate);
        ojson want = ojson::parse(c.expect);
        if (got.dump() != want.dump()) {
            detail = std::string("certificate mismatch for shape ") + c.name;
            return false;
        }
    }
    detail = "all three certificate shapes match their golden serializations";
    return true;
}

bool criterion5(std::string& detail) {
    RunConfig cfg;
    cfg.family = {"pow(0.7)", "pow(0.4)", "pow(0.3)"};
    cfg.grid = {1000.0};
    cfg.U = 0.5;
    cfg.k0 = 3;
    cfg.offset = OffsetMode::L;
    cfg.a_cap = 0.9;
    cfg.mode = "exact";
    cfg.tol = 1e-5;
    bool ok = false;
    ojson report = run_scan(cfg, g_ladder, ok);
    int per_base = report["instances_per_base"].get<int>();
    int emitted = report["bases"][0].contains("instances")
                      ? static_cast<int>(report["bases"][0]["instances"].size())
                      : 0;
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d bound instances, scan ok=%s", emitted,
                  ok ? "true" : "false");
    detail = buf;
    return ok && per_base == 27 && emitted == 27;
}

bool criterion6(std::string& detail) {
    SegmentSpec seg = trig_seg(200.0, 1.0);
    double worst = 0.0;
    for (int k : {1, 2, 3}) {
        FactorizationData a = apply_H(parse_function("sin2"), seg, k, g_ladder);
        FactorizationData b =
            apply_H(parse_function("sin2+cos2"), seg, k, g_ladder);
        for (int r = 0; r < k; ++r)
            worst = std::max(worst, std::abs(a.beta[r] - b.beta[r]));
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "max beta deviation between f choices %.2e",
                  worst);
    detail = buf;
    return worst <= 1e-8;
}

bool criterion7(std::string& detail) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        double t = 50.0 + 450.0 * i / 99.0;
        double rs = detail::hardy_z_riemann_siegel(t);
        double em = detail::hardy_z_euler_maclaurin(t);
        worst = std::max(worst, std::abs(rs - em));
    }
    bool bracket = hardy_z(14.0) * hardy_z(14.2) < 0.0;
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "max method disagreement %.2e on [50, 500]; first zero %s",
                  worst, bracket ? "bracketed in [14.0, 14.2]" : "NOT bracketed");
    detail = buf;
    return worst <= 1e-6 && bracket;
}

bool criterion8(std::string& detail) {
    std::mt19937 rng(7151823);
    std::uniform_real_distribution<double> pick(1000.0, 10000.0);
    double worst_rel = 0.0;
    int tested = 0;
    while (tested < 20) {
        double t = pick(rng);
        double zt = g_ladder.z_tilde_sq(t);
        if (zt < 0.01) continue;
        const double h = 1e-4;
        double fd = (g_ladder.phi1(t + h) - g_ladder.phi1(t - h)) / (2.0 * h);
        worst_rel = std::max(worst_rel, std::abs(fd / zt - 1.0));
        ++tested;
    }

    const double U = 1.0;
    Interval s1 = g_ladder.reverse_segment({1000.0, 1000.0 + U});
    quad::Options opt;
    opt.abs_tol = 1e-9;
    double integral = quad::integrate_oscillatory(
        [&](double t) { return g_ladder.z_tilde_sq(t); }, s1.lo, s1.hi, opt);
    double sub_err = std::abs(integral - U) / U;

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "derivative check worst rel err %.2e (20 points); "
                  "substitution identity err %.2e",
                  worst_rel, sub_err);
    detail = buf;
    return worst_rel <= 1e-3 && sub_err <= 1e-6;
}

bool criterion9(std::string& detail) {
    Verdict alone = kindred_verdict({parse_function("sin2")});
    Verdict mixed =
        kindred_verdict({parse_function("sin2"), parse_function("pow(0.5)")});
    Verdict a = kindred_verdict(trig_family());
    Verdict b = kindred_verdict(mult_family());
    bool ok = !alone.kindred && !mixed.kindred && a.kindred && b.kindred;
    bool product_incomplete = false;
    if (ok) {
        HybridFormula p = product_combine(*a.certificate, *b.certificate);
        product_incomplete = !p.complete && p.shape == "product";
    }
    detail = "lone sin2 and mixed-convention families rejected; "
             "product of unrelated hybrids marked incomplete";
    return ok && product_incomplete;
}

struct Criterion {
    const char* description;
    std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"exact factorization identity over the (f, L, k) grid", criterion1},
        {"exact complete hybrid formulas evaluate to 1", criterion2},
        {"zeta-mode residuals inside the asymptotic band with decreasing trend",
         criterion3},
        {"symbolic certificates match golden serializations", criterion4},
        {"order scan enumerates 27 bound instances, all within tolerance",
         criterion5},
        {"beta chain independent of the function choice", criterion6},
        {"independent Z evaluations agree; first zero bracketed", criterion7},
        {"ladder derivative and substitution identities", criterion8},
        {"negative controls report no kinship / incomplete products", criterion9},
    };

    int failures = 0;
    for (std::size_t i = 0; i < std::size(criteria); ++i) {
        std::string detail;
        bool pass = false;
        try {
            pass = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!pass) ++failures;
        std::printf("criterion %zu: %s: %s (%s)\n", i + 1,
                    pass ? "PASS" : "FAIL", criteria[i].description,
                    detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
