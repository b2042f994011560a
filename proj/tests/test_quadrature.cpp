#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "zlab/quadrature.hpp"
#include "zlab/zcore.hpp"

using namespace zlab;

TEST_CASE("gauss16 is exact for polynomials up to degree 31") {
    // int_0^1 x^n = 1/(n+1)
    for (int n : {0, 1, 5, 13, 21, 31}) {
        double v = quad::gauss16([n](double x) { return std::pow(x, n); }, 0.0, 1.0);
        CHECK(std::abs(v - 1.0 / (n + 1)) < 1e-14);
    }
}

TEST_CASE("closed forms on oscillatory integrands") {
    quad::Options opt;
    opt.abs_tol = 1e-12;

    double s = quad::integrate_oscillatory([](double x) { return std::sin(x); },
                                           0.0, 3.14159265358979323846, opt);
    CHECK(std::abs(s - 2.0) < 1e-11);

    // int_0^2 sin(50 x) = (1 - cos 100)/50
    double fast = quad::integrate_oscillatory(
        [](double x) { return std::sin(50.0 * x); }, 0.0, 2.0, opt);
    CHECK(std::abs(fast - (1.0 - std::cos(100.0)) / 50.0) < 1e-11);

    CHECK(quad::integrate_oscillatory([](double) { return 1.0; }, 5.0, 5.0, opt) ==
          0.0);
}

TEST_CASE("serial and OpenMP kernels agree bit for bit") {
    auto z_sq = [](double t) {
        double z = detail::hardy_z_any(t);
        return z * z;
    };
    quad::Options opt;
    opt.abs_tol = 1e-9;
    for (auto [a, b] : {std::pair{100.0, 150.0}, std::pair{1000.0, 1020.0}}) {
        auto edges = quad::oscillation_panels(a, b);
        double vs = quad::integrate_serial(z_sq, edges, opt);
        double vp = quad::integrate_omp(z_sq, edges, opt);
        CHECK(vs == vp);
    }
}

TEST_CASE("panel widths track the local zero spacing") {
    auto edges = quad::oscillation_panels(1000.0, 1010.0);
    double cap = 0.25 * quad::local_zero_spacing(1010.0);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        CHECK(edges[i + 1] - edges[i] <= cap + 1e-12);
    CHECK(edges.front() == 1000.0);
    CHECK(edges.back() == 1010.0);
}

TEST_CASE("refinement depth cap raises convergence_error") {
    // a jump discontinuity never satisfies the whole-vs-halves check
    auto step = [](double x) { return x < 0.123456789 ? 0.0 : 1.0; };
    CHECK_THROWS_AS(quad::panel_adaptive(step, 0.0, 1.0, 1e-14, 40),
                    convergence_error);
}
