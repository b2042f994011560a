#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "zlab/hop.hpp"
#include "zlab/ladder.hpp"
#include "zlab/quadrature.hpp"
#include "zlab/zcore.hpp"

using namespace zlab;

namespace {

Ladder& shared_ladder() {
    static Ladder ladder;
    return ladder;
}

}  // namespace

TEST_CASE("SegmentSpec admissibility") {
    CHECK_THROWS_AS(SegmentSpec::make(200.0, 0.0, OffsetMode::T), validation_error);
    CHECK_THROWS_AS(SegmentSpec::make(200.0, -1.0, OffsetMode::T), validation_error);
    CHECK_THROWS_AS(SegmentSpec::make(50.0, 1.0, OffsetMode::T), validation_error);
    CHECK_THROWS_AS(SegmentSpec::make(300.0, 0.5, OffsetMode::L, 1.0),
                    validation_error);
    CHECK_THROWS_AS(SegmentSpec::make(300.0, 0.9, OffsetMode::L, 0.5),
                    validation_error);
    // U too large relative to the base scale
    CHECK_THROWS_AS(SegmentSpec::make(200.0, 50.0, OffsetMode::T), validation_error);

    SegmentSpec t = SegmentSpec::make(300.0, 1.0, OffsetMode::T);
    CHECK(t.base == 300.0);
    SegmentSpec l = SegmentSpec::make(300.0, 0.5, OffsetMode::L, 0.9);
    CHECK(l.base == 300.0);
    SegmentSpec pl = SegmentSpec::make(200.0, 1.0, OffsetMode::PiL);
    CHECK(pl.base == doctest::Approx(200.0 * 3.14159265358979323846).epsilon(1e-15));
    CHECK(pl.interval().hi == pl.base + 1.0);
}

TEST_CASE("mean_value_point basics") {
    Interval seg{200.0, 200.0 + 3.14159265358979323846};

    // leftmost rule: an exact hit at the left endpoint wins
    CHECK(mean_value_point(seg, [&](double t) { return t - seg.lo; }, 0.0) ==
          seg.lo);

    // sin^2 relative to the segment start crosses 1/2 first at lo + pi/4
    double t_star = mean_value_point(
        seg, [&](double t) { double s = std::sin(t - seg.lo); return s * s; }, 0.5);
    CHECK(std::abs(t_star - (seg.lo + 0.25 * 3.14159265358979323846)) < 1e-8);

    // unattainable target
    CHECK_THROWS_AS(
        mean_value_point(seg, [](double) { return 2.0; }, 3.0), not_found_error);
    CHECK_THROWS_AS(mean_value_point({200.0, 200.0},
                                     [](double t) { return t; }, 200.0),
                    std::domain_error);
}

TEST_CASE("apply_H input validation") {
    SegmentSpec seg = SegmentSpec::make(200.0, 1.0, OffsetMode::PiL);
    CHECK_THROWS_AS(apply_H(parse_function("sin2"), seg, 0, shared_ladder()),
                    std::domain_error);
}

TEST_CASE("constant function factorizes with a trivial product") {
    // f = sin2 + cos2 = 1: every stage ratio collapses and H = 1
    FunctionExpr f = parse_function("sin2+cos2");
    SegmentSpec seg = SegmentSpec::make(200.0, 1.0, OffsetMode::PiL);
    FactorizationData d = apply_H(f, seg, 2, shared_ladder());
    CHECK(d.H_value == doctest::Approx(1.0).epsilon(1e-10));
    EvalReport rep = factorization_eval(d, EvalMode::Exact, shared_ladder());
    CHECK(rep.rhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.residual < 1e-6);
}

TEST_CASE("sin^2 factorization closes to small residuals") {
    FunctionExpr f = parse_function("sin2");
    SegmentSpec seg = SegmentSpec::make(200.0, 1.0, OffsetMode::PiL);
    FactorizationData d = apply_H(f, seg, 2, shared_ladder());

    REQUIRE(d.segments.size() == 3);
    // reverse iterates sit above the segment; their length fluctuates with
    // the local size of Ztilde^2, so no contraction is asserted here
    for (int r = 1; r <= 2; ++r) {
        CHECK(d.segments[r].lo > d.segments[r - 1].lo);
        CHECK(d.alpha[r] > d.segments[r].lo);
        CHECK(d.alpha[r] < d.segments[r].hi);
        CHECK(d.beta[r - 1] > d.segments[r].lo);
        CHECK(d.beta[r - 1] < d.segments[r].hi);
    }
    CHECK(d.alpha[0] > d.segments[0].lo);
    CHECK(d.alpha[0] < d.segments[0].hi);

    EvalReport exact = factorization_eval(d, EvalMode::Exact, shared_ladder());
    CHECK(exact.residual < 1e-5);
    EvalReport zeta = factorization_eval(d, EvalMode::Zeta, shared_ladder());
    CHECK(zeta.residual < 1e-3);
}

TEST_CASE("power function factorization with interior alpha0") {
    FunctionExpr f = parse_function("pow(0.5)");
    SegmentSpec seg = SegmentSpec::make(300.0, 0.5, OffsetMode::L, 0.9);
    FactorizationData d = apply_H(f, seg, 1, shared_ladder());
    // f vanishes at the left endpoint, so the mean value point is interior
    CHECK(d.alpha[0] > seg.base);
    CHECK(d.alpha[0] < seg.base + seg.U);
    EvalReport exact = factorization_eval(d, EvalMode::Exact, shared_ladder());
    CHECK(exact.residual < 1e-5);
}

TEST_CASE("beta chain does not depend on f") {
    SegmentSpec seg = SegmentSpec::make(200.0, 1.0, OffsetMode::PiL);
    FactorizationData a = apply_H(parse_function("sin2"), seg, 2, shared_ladder());
    FactorizationData b =
        apply_H(parse_function("sin2+cos2"), seg, 2, shared_ladder());
    REQUIRE(a.beta.size() == 2);
    for (int r = 0; r < 2; ++r) CHECK(std::abs(a.beta[r] - b.beta[r]) < 1e-8);
}

TEST_CASE("H_matrix layout and zero padding") {
    FunctionExpr f = parse_function("sin2");
    SegmentSpec seg = SegmentSpec::make(200.0, 1.0, OffsetMode::PiL);
    HMatrix m = H_matrix(f, seg, 3, shared_ladder());
    REQUIRE(m.rows.size() == 3);
    for (int k = 1; k <= 3; ++k) {
        const auto& row = m.rows[k - 1];
        REQUIRE(row.size() == 7);
        for (int r = 0; r <= k; ++r) CHECK(row[r] > 100.0);        // alphas
        for (int r = 1; r <= k; ++r) CHECK(row[k + r] > 100.0);    // betas
        for (std::size_t j = 2 * k + 1; j < row.size(); ++j) CHECK(row[j] == 0.0);
    }
    // row k reuses the same segments, so alpha_1 agrees across rows loosely
    CHECK(std::abs(m.rows[0][1] - m.rows[1][1]) < 1.0);
}

TEST_CASE("exact and zeta products differ by the V' correction exactly") {
    Ladder& ladder = shared_ladder();
    FunctionExpr f = parse_function("sin2");
    SegmentSpec seg = SegmentSpec::make(200.0, 1.0, OffsetMode::PiL);
    FactorizationData d = apply_H(f, seg, 2, ladder);
    EvalReport exact = factorization_eval(d, EvalMode::Exact, ladder);
    EvalReport zeta = factorization_eval(d, EvalMode::Zeta, ladder);
    double corr = 1.0;
    for (int r = 1; r <= d.k; ++r)
        corr *= ladder.Vprime(ladder.phi1(d.beta[r - 1])) /
                ladder.Vprime(ladder.phi1(d.alpha[r]));
    CHECK(exact.lhs_product / zeta.lhs_product ==
          doctest::Approx(corr).epsilon(1e-10));
}
