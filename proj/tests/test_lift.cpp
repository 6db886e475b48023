#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "omlab/lift.hpp"
#include "omlab/martingale.hpp"

using namespace omlab;
using lift::certificate_p3;
using lift::certificate_terms;
using lift::decompose_form;
using lift::lifted_hessian_apply;
using lift::make_lifted;

TEST_CASE("two-by-two form split: frozen examples") {
    const auto d1 = decompose_form(1.0, 0.0, 1.0);
    CHECK(d1.D == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d1.tau == doctest::Approx(1.0).epsilon(1e-15));

    const auto d2 = decompose_form(4.0, 1.0, 1.0);
    CHECK(d2.D == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d2.tau == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(lift::reconstruct(d2, 1.0, 1.0) == doctest::Approx(7.0).epsilon(1e-14));

    const auto d3 = decompose_form(1.0, 1.0, 1.0); // rank one
    CHECK(d3.D == doctest::Approx(0.0).epsilon(1e-14));

    CHECK_THROWS_AS((void)decompose_form(0.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)decompose_form(-1.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)decompose_form(1.0, 2.0, 1.0), std::domain_error);
}

TEST_CASE("form split: random reconstruction and extremal contact") {
    mart::Rng rng(7, 0);
    for (int i = 0; i < 10'000; ++i) {
        const double A = std::exp(6.0 * (rng.next_unit() - 0.5));
        const double C = std::exp(6.0 * (rng.next_unit() - 0.5));
        const double rho = 2.0 * rng.next_unit() - 1.0;
        const double B = rho * std::sqrt(A * C);
        const auto d = decompose_form(A, B, C);
        CHECK(d.D >= 0.0);

        const double x = 4.0 * (rng.next_unit() - 0.5);
        const double y = 4.0 * (rng.next_unit() - 0.5);
        const double q = A * x * x + 2.0 * B * x * y + C * y * y;
        const double scale = A * x * x + 2.0 * std::fabs(B * x * y) + C * y * y + 1e-30;
        CHECK(std::fabs(lift::reconstruct(d, x, y) - q) <= 1e-12 * scale);

        // Q >= 2 D |x||y| everywhere ...
        CHECK(q - 2.0 * d.D * std::fabs(x * y) >= -1e-12 * scale);
    }
    // ... with equality on the matched ray y = -sign(B) tau x
    const auto d = decompose_form(3.0, -1.2, 0.7);
    const double x = 1.7, y = d.tau * x; // sign(B) = -1 so the contact ray is y = +tau x
    const double q = 3.0 * x * x + 2.0 * -1.2 * x * y + 0.7 * y * y;
    CHECK(std::fabs(q - 2.0 * d.D * std::fabs(x * y)) <= 1e-12 * (q + 1.0));
}

TEST_CASE("lifted point construction") {
    const auto pq = ConjugatePair::from_p(3.0);
    const auto lp = make_lifted(pq, Vec2{3.0, 4.0}, Vec2{0.6, 0.8});
    CHECK(lp.x1 == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(lp.x2 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lp.base.value == doctest::Approx(bellman::eval_bellman(pq, 5.0, 1.0).value)
                               .epsilon(1e-14));
    CHECK_THROWS_AS((void)make_lifted(pq, Vec2{0.0, 0.0}, Vec2{1.0, 0.0}),
                    std::domain_error);
}

TEST_CASE("second derivative of the lift: axis directions at the corner") {
    const auto pq = ConjugatePair::from_p(3.0);
    const auto lp = make_lifted(pq, Vec2{1.0, 0.0}, Vec2{1.0, 0.0});
    // radial in the first pair: B_uu
    CHECK(lifted_hessian_apply(lp, {1.0, 0.0}, {0.0, 0.0}) ==
          doctest::Approx(3.0).epsilon(1e-12));
    // rotational in the first pair: B_u / x1
    CHECK(lifted_hessian_apply(lp, {0.0, 1.0}, {0.0, 0.0}) ==
          doctest::Approx(2.0).epsilon(1e-12));
    // radial in the second pair: B_vv
    CHECK(lifted_hessian_apply(lp, {0.0, 0.0}, {1.0, 0.0}) ==
          doctest::Approx(0.75).epsilon(1e-12));
    // rotational in the second pair: B_v / x2
    CHECK(lifted_hessian_apply(lp, {0.0, 0.0}, {0.0, 1.0}) ==
          doctest::Approx(2.0).epsilon(1e-12));
    // mixed radial direction picks up the raw cross term
    CHECK(lifted_hessian_apply(lp, {1.0, 0.0}, {1.0, 0.0}) ==
          doctest::Approx(4.75).epsilon(1e-12));
}

TEST_CASE("certificate terms: frozen closed-form breakdowns") {
    const Vec2 y1{1.0, 0.0}, y2{1.0, 0.0};
    const auto a = certificate_p3(y1, y2, {1.0, 0.0}, {0.0, 0.0});
    CHECK(a.term_tau == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(a.term_inv_tau == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(a.term_rotational == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(a.term_square == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(a.total == doctest::Approx(3.0).epsilon(1e-13));

    const auto b = certificate_p3(y1, y2, {0.0, 0.0}, {0.0, 1.0});
    CHECK(b.term_tau == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(b.term_inv_tau == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(b.term_rotational == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(b.term_square == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(b.total == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("certificate equals the second derivative, term-nonnegative") {
    mart::Rng rng(11, 0);
    for (double p : {2.2, 3.0, 4.0}) {
        const auto pq = ConjugatePair::from_p(p);
        for (int i = 0; i < 400; ++i) {
            const double x1 = std::exp(5.0 * (rng.next_unit() - 0.5));
            const double x2 = std::exp(5.0 * (rng.next_unit() - 0.5));
            const double t1 = 6.283185307179586 * rng.next_unit();
            const double t2 = 6.283185307179586 * rng.next_unit();
            const auto lp = make_lifted(pq, Vec2{x1 * std::cos(t1), x1 * std::sin(t1)},
                                        Vec2{x2 * std::cos(t2), x2 * std::sin(t2)});
            const Vec2 dy1{rng.next_gaussian(), rng.next_gaussian()};
            const Vec2 dy2{rng.next_gaussian(), rng.next_gaussian()};
            const auto ct = certificate_terms(lp, dy1, dy2);
            const double apply = lifted_hessian_apply(lp, dy1, dy2);
            const double scale = std::fabs(apply) + 1e-12;
            CHECK(std::fabs(ct.total - apply) <= 1e-11 * scale);
            CHECK(ct.term_tau >= -1e-12 * scale);
            CHECK(ct.term_inv_tau >= -1e-12 * scale);
            CHECK(ct.term_rotational >= -1e-12 * scale);
            CHECK(ct.term_square >= -1e-12 * scale);
            if (p == 3.0) {
                const auto cp = certificate_p3(lp.y1, lp.y2, dy1, dy2);
                CHECK(std::fabs(cp.total - ct.total) <= 1e-11 * scale);
                CHECK(std::fabs(cp.term_rotational - ct.term_rotational) <=
                      1e-10 * scale);
            }
        }
    }
}

TEST_CASE("certificate against a finite difference of the lifted function") {
    mart::Rng rng(23, 0);
    const auto pq = ConjugatePair::from_p(3.0);
    for (int i = 0; i < 200; ++i) {
        const double x1 = std::exp(3.0 * (rng.next_unit() - 0.5));
        const double x2 = std::exp(3.0 * (rng.next_unit() - 0.5));
        const double t1 = 6.283185307179586 * rng.next_unit();
        const double t2 = 6.283185307179586 * rng.next_unit();
        const Vec2 y1{x1 * std::cos(t1), x1 * std::sin(t1)};
        const Vec2 y2{x2 * std::cos(t2), x2 * std::sin(t2)};
        const auto lp = make_lifted(pq, y1, y2);
        // direction blocks scaled to the coordinate norms so one step size
        // perturbs both pairs at the same relative size
        Vec2 dy1{rng.next_gaussian(), rng.next_gaussian()};
        Vec2 dy2{rng.next_gaussian(), rng.next_gaussian()};
        const double n1 = std::sqrt(norm_sq(dy1)), n2 = std::sqrt(norm_sq(dy2));
        if (n1 == 0.0 || n2 == 0.0) continue;
        for (int k = 0; k < 2; ++k) { dy1[k] *= x1 / n1; dy2[k] *= x2 / n2; }
        const double h = 1e-4;
        const auto lifted = [&](double e) {
            const Vec2 a1{y1[0] + e * dy1[0], y1[1] + e * dy1[1]};
            const Vec2 a2{y2[0] + e * dy2[0], y2[1] + e * dy2[1]};
            return bellman::eval_bellman(pq, std::sqrt(norm_sq(a1)),
                                         std::sqrt(norm_sq(a2)))
                .value;
        };
        const double fd = (lifted(h) - 2.0 * lp.base.value + lifted(-h)) / (h * h);
        const double an = certificate_terms(lp, dy1, dy2).total;
        CHECK(std::fabs(fd - an) <= 1e-4 * (std::fabs(an) + std::fabs(fd) + 1e-9));
    }
}

TEST_CASE("rotational-coefficient slack over the quadrant") {
    const auto plus = lift::check_tau_condition('+', 32);
    CHECK(plus.min_slack >= -1e-12);
    // algebraically x1/x2, minimized at the (lo, hi) corner
    CHECK(plus.min_slack == doctest::Approx(1e-4).epsilon(1e-3));
    CHECK(plus.at_x1 == doctest::Approx(1e-2).epsilon(1e-6));
    CHECK(plus.at_x2 == doctest::Approx(1e2).epsilon(1e-6));

    // The boundary-improved analogue is genuinely negative: the improved
    // constant c = 2 + C2/C1^2 > 3 exceeds what the surface's rotational
    // coefficient can pay for, and the slack diverges near the u-axis.
    const auto minus = lift::check_tau_condition('-', 32);
    CHECK(minus.min_slack < -100.0);
}

TEST_CASE("paired lower bound: frozen example") {
    const auto pq = ConjugatePair::from_p(3.0);
    const auto lp = make_lifted(pq, Vec2{1.0, 0.0}, Vec2{1.0, 0.0});
    const auto kr = lift::key_inequality_pair(lp, {1.0, 0.0}, {1.0, 0.0},
                                              {0.0, 1.0}, {0.0, 1.0});
    CHECK(kr.lhs == doctest::Approx(8.75).epsilon(1e-12));
    CHECK(kr.rhs == doctest::Approx(4.0 * std::sqrt(1.5)).epsilon(1e-12));
    CHECK(kr.xi1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(kr.xi2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(kr.slack == doctest::Approx(8.75 - 4.0 * std::sqrt(1.5)).epsilon(1e-12));
}

TEST_CASE("paired lower bound: constraint violations are rejected") {
    const auto pq = ConjugatePair::from_p(3.0);
    const auto lp = make_lifted(pq, Vec2{1.0, 0.0}, Vec2{1.0, 0.0});
    // component products fail to cancel
    CHECK_THROWS_AS((void)lift::key_inequality_pair(lp, {1.0, 0.0}, {1.0, 1.0},
                                                    {0.0, 1.0}, {0.0, 0.0}),
                    std::invalid_argument);
    // component lengths disagree
    CHECK_THROWS_AS((void)lift::key_inequality_pair(lp, {1.0, 0.0}, {1.0, 0.0},
                                                    {0.0, 1.0}, {1.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("paired lower bound holds on constrained random pairs") {
    for (double p : {2.5, 3.0, 4.0}) {
        const auto pq = ConjugatePair::from_p(p);
        mart::Rng rng(101, std::uint64_t(p * 100));
        for (int i = 0; i < 1000; ++i) {
            const double x1 = std::exp(4.0 * (rng.next_unit() - 0.5));
            const double x2 = std::exp(4.0 * (rng.next_unit() - 0.5));
            const double t1 = 6.283185307179586 * rng.next_unit();
            const double t2 = 6.283185307179586 * rng.next_unit();
            const auto lp = make_lifted(pq, Vec2{x1 * std::cos(t1), x1 * std::sin(t1)},
                                        Vec2{x2 * std::cos(t2), x2 * std::sin(t2)});
            const Vec2 dy1{rng.next_gaussian(), rng.next_gaussian()};
            const Vec2 dy1p{rng.next_gaussian(), rng.next_gaussian()};
            const Vec2 dy2{rng.next_gaussian(), rng.next_gaussian()};
            const double s = rng.next_unit() < 0.5 ? -1.0 : 1.0;
            const Vec2 dy2p{-s * dy2[1], s * dy2[0]};
            const auto kr = lift::key_inequality_pair(lp, dy1, dy2, dy1p, dy2p);
            CHECK(kr.slack >= -1e-10 * (std::fabs(kr.lhs) + std::fabs(kr.rhs)));
        }
    }
}

TEST_CASE("rotation-pair scalar identity") {
    const auto ex = lift::orthogonality_identity(2.0, 3.0, {1.0, 0.0}, {0.0, 1.0});
    CHECK(ex.lhs == doctest::Approx(13.0).epsilon(1e-15));
    CHECK(ex.rhs == doctest::Approx(13.0).epsilon(1e-15));
    const auto ex2 = lift::orthogonality_identity(2.0, 3.0, {1.0, 1.0}, {1.0, -1.0});
    CHECK(ex2.lhs == doctest::Approx(ex2.rhs).epsilon(1e-14));
    CHECK_THROWS_AS((void)lift::orthogonality_identity(1.0, 1.0, {1.0, 0.0}, {1.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)lift::orthogonality_identity(1.0, 1.0, {1.0, 0.0}, {0.0, 2.0}),
                    std::invalid_argument);
}
