#ifndef ZLAB_QUADRATURE_HPP
#define ZLAB_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "zlab/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zlab::quad {

struct Options {
    double abs_tol = 1e-9;
    int max_depth = 40;
    bool parallel = false;  // OpenMP over top-level panels
};

// Mean spacing of consecutive Z-zeros near height t, 2pi/ln(t/2pi),
// clamped below t = 50 where the formula stops making sense.
inline double local_zero_spacing(double t) {
    double tc = std::max(t, 50.0);
    return 2.0 * 3.14159265358979323846 / std::log(tc / 6.283185307179586477);
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1], computed once by
// Newton iteration on P_16 (no tables to mistype).
struct Gauss16 {
    std::array<double, 16> x{}, w{};
    Gauss16() {
        const int n = 16;
        const double pi = 3.14159265358979323846;
        for (int i = 0; i < n / 2; ++i) {
            double xi = std::cos(pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = xi;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (xi * p1 - p0) / (xi * xi - 1.0);
                double dx = p1 / pp;
                xi -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            x[i] = -xi;
            x[n - 1 - i] = xi;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * pp * pp);
        }
    }
};

inline const Gauss16& gauss16_rule() {
    static const Gauss16 g;
    return g;
}

template <class F>
double gauss16(F&& f, double a, double b) {
    const Gauss16& g = gauss16_rule();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += g.w[i] * f(c + h * g.x[i]);
    return s * h;
}

// One panel, refined by halving until the whole-vs-halves discrepancy is
// within tol.  Throws convergence_error at the depth cap.
template <class F>
double panel_adaptive(F&& f, double a, double b, double tol, int depth) {
    double whole = gauss16(f, a, b);
    double m = 0.5 * (a + b);
    double left = gauss16(f, a, m), right = gauss16(f, m, b);
    double halves = left + right;
    double err = std::abs(whole - halves);
    // floor: relative roundoff plus integrand evaluation noise times width,
    // so noisy integrands terminate instead of refining forever
    double floor = std::max(1e-16 * (std::abs(halves) + 1.0), 1e-13 * (b - a));
    if (err <= std::max(tol, floor)) return halves;
    if (depth <= 0)
        throw convergence_error("panel_adaptive: refinement depth cap exceeded");
    return panel_adaptive(f, a, m, 0.5 * tol, depth - 1) +
           panel_adaptive(f, m, b, 0.5 * tol, depth - 1);
}

// Panel boundaries for [a, b]: widths capped at a quarter of the local
// Z-zero spacing so oscillatory integrands are resolved from the start.
inline std::vector<double> oscillation_panels(double a, double b) {
    std::vector<double> edges;
    edges.push_back(a);
    double width = 0.25 * local_zero_spacing(std::max(std::abs(a), std::abs(b)));
    double n = std::ceil((b - a) / width);
    if (n < 1) n = 1;
    double h = (b - a) / n;
    for (long i = 1; i < static_cast<long>(n); ++i) edges.push_back(a + h * i);
    edges.push_back(b);
    return edges;
}

// Serial reference kernel: panels integrated one by one, summed in order.
template <class F>
double integrate_serial(F&& f, const std::vector<double>& edges,
                        const Options& opt) {
    const double span = edges.back() - edges.front();
    std::vector<double> part(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double w = edges[i + 1] - edges[i];
        part[i] = panel_adaptive(f, edges[i], edges[i + 1],
                                 opt.abs_tol * (w / span), opt.max_depth);
    }
    double s = 0.0;
    for (double v : part) s += v;
    return s;
}

// OpenMP kernel: panels are independent; the final sum runs in panel order
// so the result is bit-identical to the serial reference.
template <class F>
double integrate_omp(F&& f, const std::vector<double>& edges,
                     const Options& opt) {
    const double span = edges.back() - edges.front();
    std::vector<double> part(edges.size() - 1);
    bool failed = false;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (long i = 0; i < static_cast<long>(part.size()); ++i) {
        if (failed) continue;
        double w = edges[i + 1] - edges[i];
        try {
            part[i] = panel_adaptive(f, edges[i], edges[i + 1],
                                     opt.abs_tol * (w / span), opt.max_depth);
        } catch (...) {
            failed = true;
        }
    }
    if (failed)
        throw convergence_error("integrate_omp: refinement depth cap exceeded");
    double s = 0.0;
    for (double v : part) s += v;
    return s;
}

template <class F>
double integrate_oscillatory(F&& f, double a, double b, const Options& opt = {}) {
    if (b <= a) return 0.0;
    std::vector<double> edges = oscillation_panels(a, b);
    return opt.parallel ? integrate_omp(f, edges, opt)
                        : integrate_serial(f, edges, opt);
}

}  // namespace zlab::quad

#endif
