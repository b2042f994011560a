#ifndef ZLAB_HOP_HPP
#define ZLAB_HOP_HPP

#include <functional>
#include <optional>
#include <vector>

#include "zlab/falgebra.hpp"
#include "zlab/ladder.hpp"

namespace zlab {

enum class OffsetMode { T, L, PiL };

// The interval [base, base+U] (base already includes the pi factor for PiL).
struct SegmentSpec {
    double base = 0.0;
    double U = 0.0;
    OffsetMode mode = OffsetMode::T;
    std::optional<double> a_cap;  // power families: U <= a_cap < 1

    Interval interval() const { return {base, base + U}; }

    // base_or_L is L for modes L/PiL, the raw height for mode T.
    static SegmentSpec make(double base_or_L, double U, OffsetMode mode,
                            std::optional<double> a_cap = {});
};

// Output of the operator H-hat for one (f, segment, k).
struct FactorizationData {
    FunctionExpr f;
    SegmentSpec seg;
    int k = 0;
    std::vector<double> alpha;      // alpha[0..k], alpha[0] interior to S^0
    std::vector<double> beta;       // beta[0] = beta_1, ..., beta[k-1] = beta_k
    std::vector<Interval> segments; // S^0 .. S^k (reverse iterates)
    std::vector<double> stage_A;    // A_r = int_{S^r} f(phi1^r) Ztilde^2, r=1..k
    std::vector<double> stage_B;    // B_r = int_{S^r} f(phi1^r),          r=1..k
    double H_value = 0.0;           // (1/U) int_{S^0} f

    double base_L() const;          // L to feed eval_function
};

struct HMatrix {
    int k0 = 0;
    std::vector<std::vector<double>> rows;  // k0 x (2*k0+1), zero padded
};

enum class EvalMode { Exact, Zeta };

struct EvalReport {
    double lhs_product = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  // |lhs/rhs - 1|
};

// Leftmost t* in seg with target_fn(t*) = target, located by a sign-change
// scan (grid at most a quarter of the local Z-zero spacing) plus bisection
// to width 1e-10 * |seg|.
double mean_value_point(Interval seg, const std::function<double(double)>& target_fn,
                        double target);

FactorizationData apply_H(const FunctionExpr& f, const SegmentSpec& seg, int k,
                          const Ladder& ladder);

HMatrix H_matrix(const FunctionExpr& f, const SegmentSpec& seg, int k0,
                 const Ladder& ladder);

EvalReport factorization_eval(const FactorizationData& data, EvalMode mode,
                              const Ladder& ladder);

}  // namespace zlab

#endif
