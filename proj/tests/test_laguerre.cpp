#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "omlab/laguerre.hpp"

using namespace omlab;
using laguerre::eval;
using laguerre::eval_all;

namespace {

// Independent oracle: for integer p the series terminates, so the function
// is the degree-p polynomial with coefficients a_{k+1} = a_k (k-p)/(k+1)^2.
// Evaluate it by Horner's rule — no shared code with the implementation.
std::vector<double> integer_coeffs(int p) {
    std::vector<double> c{1.0};
    for (int k = 0; k < p; ++k)
        c.push_back(c.back() * (k - p) / double((k + 1) * (k + 1)));
    return c;
}

double horner(const std::vector<double>& c, double s) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
    return acc;
}

// Independent root oracle: plain bisection of the Horner polynomial.
double bisect_root(const std::vector<double>& c, double lo, double hi) {
    REQUIRE(horner(c, lo) > 0.0);
    REQUIRE(horner(c, hi) < 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (horner(c, mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("series value at zero is one") {
    for (double p : {1.1, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0}) CHECK(eval(p, 0.0) == 1.0);
}

TEST_CASE("degree-one polynomial: 1 - s") {
    CHECK(eval(1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eval(1.0, 0.25) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("integer exponents match the Horner polynomial oracle") {
    for (int p : {1, 2, 3, 4}) {
        const auto c = integer_coeffs(p);
        for (double s : {0.05, 0.3, 0.7, 1.4, 2.9}) {
            const double ref = horner(c, s);
            CHECK(std::fabs(eval(double(p), s) - ref) <= 1e-13 * (1.0 + std::fabs(ref)));
        }
    }
}

TEST_CASE("series satisfies its defining differential equation") {
    for (double p : {1.3, 2.0, 2.7, 3.0, 4.5, 6.0})
        for (double s : {0.1, 0.5, 1.0, 2.0, 4.0}) {
            const auto e = eval_all(p, s);
            CHECK(std::fabs(laguerre::ode_residual(p, s)) <=
                  1e-9 * (1.0 + std::fabs(e.value)));
        }
}

TEST_CASE("analytic first derivative agrees with a central difference") {
    const double h = 1e-6;
    for (double p : {1.5, 2.0, 3.0, 4.0})
        for (double s : {0.2, 0.8, 1.7}) {
            const auto e = eval_all(p, s);
            const double fd = (eval(p, s + h) - eval(p, s - h)) / (2.0 * h);
            CHECK(std::fabs(e.d1 - fd) <= 1e-7 * (1.0 + std::fabs(e.d1)));
        }
}

TEST_CASE("quadratic root has the closed form 2 - sqrt(2)") {
    const double z = laguerre::least_positive_root(2.0);
    CHECK(std::fabs(z - (2.0 - std::sqrt(2.0))) <= 1e-11);
}

TEST_CASE("cubic root matches an independent bisection oracle") {
    const double oracle = bisect_root(integer_coeffs(3), 0.0, 1.0);
    const double z = laguerre::least_positive_root(3.0);
    CHECK(std::fabs(z - oracle) <= 1e-11);
    // ten-digit sanity pin for the cubic root
    CHECK(std::fabs(z - 0.4157745568) <= 1e-6);
}

TEST_CASE("root is a genuine sign change of the series") {
    const double h = 1e-9;
    for (double p : {2.0, 2.5, 3.0, 4.0, 6.0}) {
        const double z = laguerre::least_positive_root(p);
        CHECK(z > 0.0);
        CHECK(z < 1.0);
        CHECK(eval(p, z - 1e3 * h) > 0.0);
        CHECK(eval(p, z + 1e3 * h) < 0.0);
        CHECK(std::fabs(eval(p, z)) <= 1e-9);
    }
}

TEST_CASE("the two constant legs are exact reciprocals") {
    for (double p : {2.0, 2.3, 3.0, 4.0, 5.5}) {
        const auto sol = laguerre::solve(p);
        CHECK(sol.c_left * sol.c_right == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(sol.c_right > 0.0);
    }
}

TEST_CASE("both legs collapse to one at the self-conjugate exponent") {
    const auto sol = laguerre::solve(2.0);
    CHECK(std::fabs(sol.c_right - 1.0) <= 1e-10);
    CHECK(std::fabs(sol.c_left - 1.0) <= 1e-10);
}

TEST_CASE("cubic-root constant leg matches its frozen decimal") {
    const auto sol = laguerre::solve(3.0);
    // frozen from the bisection oracle of the terminating cubic
    const double oracle = bisect_root(integer_coeffs(3), 0.0, 1.0);
    const double cr = std::sqrt(2.0) * (1.0 - oracle) / oracle;
    CHECK(std::fabs(sol.c_right - cr) <= 1e-10);
    CHECK(std::fabs(sol.c_right - 1.987181591) <= 1e-8);
}

TEST_CASE("martingale-comparison reference constants") {
    const auto b3 = laguerre::burkholder_constants(ConjugatePair::from_p(3.0));
    CHECK(b3.p_leg == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(b3.q_leg == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-14));
    const auto b2 = laguerre::burkholder_constants(ConjugatePair::from_p(2.0));
    CHECK(b2.p_leg == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b2.q_leg == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("comparison table rows") {
    const auto rows = laguerre::conjecture_table({2.0, 3.0, 4.0});
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK_FALSE(r.failed);
        CHECK(r.q == doctest::Approx(r.p / (r.p - 1.0)).epsilon(1e-14));
    }
    CHECK(std::fabs(rows[0].gap) <= 1e-10); // self-conjugate row
    // the gap stays small but nonzero away from the self-conjugate point
    CHECK(rows[1].gap == doctest::Approx(0.00135).epsilon(0.05));
    CHECK(rows[1].c_right == doctest::Approx(laguerre::solve(3.0).c_right).epsilon(1e-14));
    CHECK(laguerre::conjecture_table({}).empty());
}

TEST_CASE("exponents at or below one are rejected up front") {
    CHECK_THROWS_AS((void)laguerre::least_positive_root(0.9), std::domain_error);
    CHECK_THROWS_AS((void)laguerre::least_positive_root(1.0), std::domain_error);
}
