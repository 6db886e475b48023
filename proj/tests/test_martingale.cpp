#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "omlab/martingale.hpp"

using namespace omlab;
using mart::MartingaleSpec;
using mart::Rng;

TEST_CASE("generator determinism and stream splitting") {
    Rng a(5, 0), b(5, 0), c(5, 1), d(6, 0);
    bool same_ab = true, same_ac = true, same_ad = true;
    for (int i = 0; i < 16; ++i) {
        const auto va = a.next_u64();
        same_ab &= (va == b.next_u64());
        same_ac &= (va == c.next_u64());
        same_ad &= (va == d.next_u64());
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);
    CHECK_FALSE(same_ad);
}

TEST_CASE("uniform draws live strictly inside the unit interval") {
    Rng rng(1, 0);
    for (int i = 0; i < 100'000; ++i) {
        const double x = rng.next_unit();
        REQUIRE(x > 0.0);
        REQUIRE(x < 1.0);
    }
}

TEST_CASE("gaussian moments") {
    Rng rng(2, 0);
    const int n = 200'000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.next_gaussian();
        s += g;
        s2 += g * g;
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    CHECK(std::fabs(mean) <= 4.0 / std::sqrt(double(n)));
    CHECK(std::fabs(var - 1.0) <= 5.0 * std::sqrt(2.0 / double(n)));
}

TEST_CASE("pair transform: frozen example and exact identities") {
    const auto [u, v] = mart::transform_AZ({1.0, 0.0}, {0.0, 1.0});
    CHECK(u[0] == -2.0);
    CHECK(u[1] == 0.0);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 2.0);

    Rng rng(3, 0);
    for (int i = 0; i < 10'000; ++i) {
        const Vec2 x{rng.next_gaussian(), rng.next_gaussian()};
        const Vec2 y{rng.next_gaussian(), rng.next_gaussian()};
        const auto [uu, vv] = mart::transform_AZ(x, y);
        // both identities are exact in floating point, not just small
        CHECK(dot(uu, vv) == 0.0);
        CHECK(norm_sq(uu) == norm_sq(vv));
        const double s = norm_sq(x) + norm_sq(y);
        CHECK(norm_sq(uu) + norm_sq(vv) <= 4.0 * s * (1.0 + 1e-12));
    }
}

TEST_CASE("transform lemma scan") {
    const auto rep = mart::check_transform_lemmas(1, 100'000);
    CHECK(rep.n_draws == 100'000);
    CHECK(rep.max_abs_dot <= 1e-14);
    CHECK(rep.max_bracket_ratio <= 4.0 + 1e-12);
    CHECK(rep.max_bracket_ratio >= 3.9); // the factor 4 is sharp
}

TEST_CASE("simulation validation") {
    MartingaleSpec bad;
    bad.construction = "warp";
    CHECK_THROWS_AS((void)mart::simulate(bad), std::invalid_argument);
    MartingaleSpec neg;
    neg.paths = 0;
    CHECK_THROWS_AS((void)mart::simulate(neg), std::invalid_argument);
}

TEST_CASE("identity construction: comparison pair coincides with the source") {
    MartingaleSpec spec;
    spec.construction = "identity";
    spec.paths = 50;
    spec.steps = 100;
    spec.seed = 3;
    const auto ens = mart::simulate(spec, /*enforce_hypotheses=*/true);
    REQUIRE(int(ens.z_x.size()) == spec.paths);
    const double bracket = 2.0 * spec.steps * spec.dt;
    for (int i = 0; i < spec.paths; ++i) {
        CHECK(ens.z_x[i] == ens.w_u[i]);
        CHECK(ens.z_y[i] == ens.w_v[i]);
        CHECK(ens.bracket_z[i] == doctest::Approx(bracket).epsilon(1e-12));
    }
}

TEST_CASE("simulation is deterministic for a fixed configuration") {
    MartingaleSpec spec;
    spec.paths = 40;
    spec.steps = 60;
    spec.seed = 17;
    const auto a = mart::simulate(spec);
    const auto b = mart::simulate(spec);
    REQUIRE(a.z_x.size() == b.z_x.size());
    for (size_t i = 0; i < a.z_x.size(); ++i) {
        CHECK(a.z_x[i] == b.z_x[i]);
        CHECK(a.w_u[i] == b.w_u[i]);
    }
}

TEST_CASE("terminal values center at zero") {
    MartingaleSpec spec;
    spec.construction = "rotation";
    spec.paths = 2000;
    spec.steps = 100;
    spec.seed = 21;
    const auto ens = mart::simulate(spec, true);
    double s = 0.0;
    for (double z : ens.z_x) s += z;
    const double sd = std::sqrt(spec.steps * spec.dt); // unit frames
    CHECK(std::fabs(s / spec.paths) <= 4.0 * sd / std::sqrt(double(spec.paths)));
}

TEST_CASE("norm estimate: constant ensemble and validation") {
    mart::PathEnsemble ens;
    ens.z_x = {3.0, 3.0};
    ens.z_y = {4.0, 4.0};
    ens.w_u = {1.0, 1.0};
    ens.w_v = {0.0, 0.0};
    for (double p : {1.25, 1.5, 2.0}) {
        const auto e = mart::estimate_norm(ens, 'Z', p);
        CHECK(e.value == doctest::Approx(5.0).epsilon(1e-13));
        CHECK(e.std_error == doctest::Approx(0.0).epsilon(1e-13));
    }
    CHECK(mart::estimate_norm(ens, 'W', 2.0).value == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS((void)mart::estimate_norm(ens, 'X', 2.0), std::invalid_argument);
    CHECK_THROWS_AS((void)mart::estimate_norm(ens, 'Z', 0.0), std::invalid_argument);
}

TEST_CASE("norm estimate: one-step gaussian has second moment two") {
    MartingaleSpec spec;
    spec.construction = "identity";
    spec.paths = 100'000;
    spec.steps = 1;
    spec.dt = 1.0;
    spec.seed = 9;
    const auto ens = mart::simulate(spec);
    const auto e = mart::estimate_norm(ens, 'Z', 2.0);
    CHECK(e.std_error < 0.01);
    CHECK(std::fabs(e.value - std::sqrt(2.0)) <= 3.0 * e.std_error + 1e-9);
}

TEST_CASE("comparison experiment: identity construction is the fixed point") {
    MartingaleSpec spec;
    spec.construction = "identity";
    spec.paths = 200;
    spec.steps = 50;
    const auto rep = mart::inequality_experiment(spec);
    CHECK(rep.ratio == 1.0);
    CHECK(std::fabs(rep.std_error) <= 1e-12);
    CHECK(rep.bound == doctest::Approx(std::sqrt(2.0 / (1.5 * 1.5 - 1.5))).epsilon(1e-14));
    CHECK(rep.margin == doctest::Approx(rep.bound - 1.0).epsilon(1e-12));
}

TEST_CASE("comparison experiment: battery stays within the bound") {
    for (const char* c : {"identity", "rotation", "mixed", "switch"}) {
        for (double q : {1.25, 1.5, 2.0}) {
            MartingaleSpec spec;
            spec.construction = c;
            spec.q = q;
            spec.paths = 400;
            spec.steps = 150;
            spec.seed = 5;
            const auto rep = mart::inequality_experiment(spec);
            INFO("construction ", c, " q ", q);
            CHECK(rep.margin >= -3.0 * rep.std_error);
            if (q == 2.0) CHECK(rep.bound == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("comparison experiment: the transform pair is subordinate with ratio near half") {
    MartingaleSpec spec;
    spec.construction = "az";
    spec.paths = 500;
    spec.steps = 100;
    const auto rep = mart::inequality_experiment(spec); // enforces hypotheses
    CHECK(rep.ratio < 1.0);
    CHECK(rep.ratio == doctest::Approx(0.5).epsilon(0.15));
    CHECK(rep.margin > 0.0);
}

TEST_CASE("comparison experiment: exponent validation") {
    MartingaleSpec spec;
    spec.q = 3.0;
    CHECK_THROWS_AS((void)mart::inequality_experiment(spec), std::invalid_argument);
}

TEST_CASE("pathwise chain comparison keeps a nonnegative slack") {
    MartingaleSpec spec;
    spec.q = 1.5;
    spec.paths = 300;
    spec.steps = 150;
    spec.construction = "rotation";
    const auto rep = mart::ito_chain_check(spec);
    CHECK(rep.lhs > 0.0);
    CHECK(rep.rhs > 0.0);
    CHECK(rep.slack >= -3.0 * rep.std_error);
}
