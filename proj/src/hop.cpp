#include "zlab/hop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zlab/quadrature.hpp"
#include "zlab/zcore.hpp"

namespace zlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SegmentSpec SegmentSpec::make(double base_or_L, double U, OffsetMode mode,
                              std::optional<double> a_cap) {
    SegmentSpec s;
    s.mode = mode;
    s.base = (mode == OffsetMode::PiL) ? kPi * base_or_L : base_or_L;
    s.U = U;
    s.a_cap = a_cap;
    if (!(s.U > 0.0)) throw validation_error("SegmentSpec: U must be positive");
    if (a_cap) {
        if (!(*a_cap < 1.0)) throw validation_error("SegmentSpec: a_cap must be < 1");
        if (s.U > *a_cap) throw validation_error("SegmentSpec: U exceeds a_cap");
    }
    if (!(s.base >= 100.0))
        throw validation_error("SegmentSpec: base below ladder domain (100)");
    // finite-scale admissibility, stand-in for U = o(T / ln T)
    if (!(s.U <= s.base / (10.0 * std::log(s.base))))
        throw validation_error("SegmentSpec: U violates U <= base/(10 ln base)");
    return s;
}

double FactorizationData::base_L() const { return seg.base; }

double mean_value_point(Interval seg, const std::function<double(double)>& target_fn,
                        double target) {
    const double len = seg.length();
    if (!(len > 0.0)) throw std::domain_error("mean_value_point: empty segment");
    double step = std::min(0.25 * quad::local_zero_spacing(seg.hi), len / 8.0);
    long n = static_cast<long>(std::ceil(len / step));
    step = len / n;

    double prev_t = seg.lo;
    double prev_g = target_fn(prev_t) - target;
    if (prev_g == 0.0) return seg.lo;  // leftmost rule
    double gmin = prev_g, gmax = prev_g;
    for (long i = 1; i <= n; ++i) {
        double t = (i == n) ? seg.hi : seg.lo + step * i;
        double g = target_fn(t) - target;
        gmin = std::min(gmin, g);
        gmax = std::max(gmax, g);
        if (g == 0.0) return t;
        if ((prev_g < 0.0) != (g < 0.0)) {
            // bisect [prev_t, t]; tolerance floored at a few ulps of the
            // height, reverse-iterated segments can be tiny relative to it
            double lo = prev_t, hi = t, glo = prev_g;
            const double width_tol =
                std::max(1e-10 * len,
                         8.0 * std::numeric_limits<double>::epsilon() *
                             std::max(std::abs(seg.lo), std::abs(seg.hi)));
            while (hi - lo > width_tol) {
                double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                double gm = target_fn(mid) - target;
                if (gm == 0.0) return mid;
                if ((glo < 0.0) == (gm < 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev_t = t;
        prev_g = g;
    }
    throw not_found_error(
        "mean_value_point: no sign change at scan resolution (target " +
        std::to_string(target) + " vs scan range [" + std::to_string(gmin + target) +
        ", " + std::to_string(gmax + target) + "])");
}

namespace {

// r-fold forward push: t in S^r  ->  phi1^r(t) in S^0
double phi_fold(const Ladder& ladder, double t, int r) {
    for (int i = 0; i < r; ++i) t = ladder.phi1(t);
    return t;
}

quad::Options seg_quad_options(const Ladder& ladder) {
    quad::Options opt;
    opt.abs_tol = 1e-9;
    opt.parallel = ladder.params().parallel;
    return opt;
}

}  // namespace

FactorizationData apply_H(const FunctionExpr& f, const SegmentSpec& seg, int k,
                          const Ladder& ladder) {
    if (k < 1) throw std::domain_error("apply_H: requires k >= 1");
    const double L = seg.base;

    FactorizationData out;
    out.f = f;
    out.seg = seg;
    out.k = k;
    out.segments.resize(k + 1);
    out.segments[0] = seg.interval();
    for (int r = 1; r <= k; ++r)
        out.segments[r] = ladder.reverse_segment(out.segments[r - 1]);

    quad::Options opt = seg_quad_options(ladder);

    auto f_at = [&](double t) { return eval_function(f, t, L); };
    double B0 = quad::integrate_oscillatory(f_at, seg.base, seg.base + seg.U, opt);
    if (!(B0 > 0.0))
        throw std::domain_error("apply_H: f must be positive on a set of positive measure");
    out.H_value = B0 / seg.U;

    out.alpha.assign(k + 1, 0.0);
    out.beta.assign(k, 0.0);
    out.stage_A.assign(k, 0.0);
    out.stage_B.assign(k, 0.0);

    auto ztilde = [&](double t) { return ladder.z_tilde_sq(t); };

    for (int r = 1; r <= k; ++r) {
        const Interval& S = out.segments[r];
        auto f_fold = [&](double t) { return f_at(phi_fold(ladder, t, r)); };
        double A = quad::integrate_oscillatory(
            [&](double t) { return f_fold(t) * ztilde(t); }, S.lo, S.hi, opt);
        double B = quad::integrate_oscillatory(f_fold, S.lo, S.hi, opt);
        if (!(A > 0.0 && B > 0.0))
            throw std::domain_error("apply_H: stage integral not positive");
        out.stage_A[r - 1] = A;
        out.stage_B[r - 1] = B;
        out.alpha[r] = mean_value_point(S, ztilde, A / B);
        out.beta[r - 1] =
            mean_value_point(S, ztilde, out.segments[r - 1].length() / S.length());
    }

    // alpha_0: leftmost solution of f(alpha0) = B_k / |S^k| in S^0
    double target0 = out.stage_B[k - 1] / out.segments[k].length();
    out.alpha[0] = mean_value_point(out.segments[0], f_at, target0);
    return out;
}

HMatrix H_matrix(const FunctionExpr& f, const SegmentSpec& seg, int k0,
                 const Ladder& ladder) {
    if (k0 < 1) throw std::domain_error("H_matrix: requires k0 >= 1");
    HMatrix m;
    m.k0 = k0;
    m.rows.assign(k0, std::vector<double>(2 * k0 + 1, 0.0));
    for (int k = 1; k <= k0; ++k) {
        FactorizationData d = apply_H(f, seg, k, ladder);
        for (int r = 0; r <= k; ++r) m.rows[k - 1][r] = d.alpha[r];
        for (int r = 1; r <= k; ++r) m.rows[k - 1][k + r] = d.beta[r - 1];
    }
    return m;
}

EvalReport factorization_eval(const FactorizationData& data, EvalMode mode,
                              const Ladder& ladder) {
    EvalReport rep;
    double lhs = 1.0;
    for (int r = 1; r <= data.k; ++r) {
        double a = data.alpha[r], b = data.beta[r - 1];
        if (mode == EvalMode::Exact) {
            double den = ladder.z_tilde_sq(b);
            if (den < 1e-12)
                throw degenerate_error("factorization_eval: Ztilde^2(beta) ~ 0");
            lhs *= ladder.z_tilde_sq(a) / den;
        } else {
            double den = zeta_mod_sq_half(b);
            if (den < 1e-12)
                throw degenerate_error(
                    "factorization_eval: |zeta(1/2+i beta)|^2 below 1e-12 "
                    "(beta too near a zeta zero; perturb U)");
            lhs *= zeta_mod_sq_half(a) / den;
        }
    }
    double f0 = eval_function(data.f, data.alpha[0], data.base_L());
    if (f0 == 0.0) throw degenerate_error("factorization_eval: f(alpha0) = 0");
    rep.lhs_product = lhs;
    rep.rhs = data.H_value / f0;
    rep.residual = std::abs(lhs / rep.rhs - 1.0);
    return rep;
}

}  // namespace zlab
