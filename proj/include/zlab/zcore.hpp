#ifndef ZLAB_ZCORE_HPP
#define ZLAB_ZCORE_HPP

#include "zlab/errors.hpp"

namespace zlab {

// Accuracy control for critical-line evaluations.
struct EvalAccuracy {
    double target_abs_error = 1e-8;
    int max_terms = 64;

    void validate() const {
        if (!(target_abs_error > 0.0))
            throw validation_error("target_abs_error must be positive");
        if (max_terms < 1) throw validation_error("max_terms must be >= 1");
    }
};

// Riemann-Siegel theta via the standard asymptotic expansion
//   theta(t) = (t/2)ln(t/2pi) - t/2 - pi/8 + 1/(48t) + 7/(5760 t^3) + ...
// truncated so the first omitted term is <= target_abs_error.
double riemann_siegel_theta(double t, const EvalAccuracy& acc = {});

// theta(t) = Im log Gamma(1/4 + it/2) - (t/2) ln pi, accurate to ~1e-13
// for all t >= 0.  Reference path used to cross-check the series.
double theta_exact(double t);

// Real Hardy Z(t), |error| <= target_abs_error.  Riemann-Siegel main sum
// with correction terms for t >= 50, Euler-Maclaurin below.  Requires t >= 1.
double hardy_z(double t, const EvalAccuracy& acc = {});

// |zeta(1/2+it)|^2 = Z(t)^2.
double zeta_mod_sq_half(double t, const EvalAccuracy& acc = {});

namespace detail {

// Z via the Riemann-Siegel formula (main sum + 5 correction terms).
// Valid for t >= 50 at ~3e-7 worst-case near t = 50, much better above.
double hardy_z_riemann_siegel(double t);

// Z via Euler-Maclaurin evaluation of zeta(1/2+it) and the exact phase.
// Works for any t >= 0; cost grows linearly with t.
double hardy_z_euler_maclaurin(double t);

// Internal unchecked Z for quadrature kernels: EM below 50, RS above,
// default accuracy, no t >= 1 precondition.
double hardy_z_any(double t);

}  // namespace detail

}  // namespace zlab

#endif
