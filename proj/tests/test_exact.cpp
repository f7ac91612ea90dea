#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "sep/configuration.hpp"
#include "sep/dynamics.hpp"
#include "sep/enumeration.hpp"
#include "sep/environment.hpp"
#include "sep/event_stream.hpp"
#include "sep/exact.hpp"
#include "sep/law.hpp"
#include "sep/rng.hpp"
#include "sep/stats.hpp"

using namespace sep;

namespace {

Environment constant_env(double w, long long n) {
    return Environment{std::vector<double>(static_cast<size_t>(n), w), 1};
}

// max_i |(pi L)_i|, the stationarity residual
double stationarity_residual(const Distribution& pi, const GeneratorMatrix& gen) {
    std::vector<double> flux(gen.n, 0.0);
    gen.apply_left(pi.p, flux);
    double worst = 0.0;
    for (double f : flux) worst = std::max(worst, std::abs(f));
    return worst;
}

}  // namespace

TEST_SUITE("exact") {

TEST_CASE("generator rows sum to zero and exit rates are sane") {
    Environment env = sample_environment(EnvironmentLaw::uniform(0.6, 0.9), 6, 3);
    StateEnumeration states(6, 3);
    GeneratorMatrix gen = generator_matrix(env, states);
    REQUIRE(gen.n == states.size());
    CHECK(gen.max_exit_rate() > 0.0);
    for (size_t i = 0; i < gen.n; ++i) {
        double row = gen.diag[i];
        for (size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e) {
            CHECK(gen.rate[e] > 0.0);
            row += gen.rate[e];
        }
        CHECK(std::abs(row) <= 1e-12);
    }
}

TEST_CASE("blocked edges remove exactly the crossing transitions") {
    Environment env = sample_environment(EnvironmentLaw::uniform(0.6, 0.9), 4, 5);
    StateEnumeration states(4, 2);
    GeneratorMatrix gen = generator_matrix(env, states, {2});
    for (size_t i = 0; i < gen.n; ++i) {
        Configuration ci = states.config(i);
        for (size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e) {
            Configuration cj = states.config(gen.col[e]);
            long long vacated = 0;
            for (long long x = 1; x <= 4; ++x)
                if (ci.occupied(x) && !cj.occupied(x)) vacated = x;
            long long entered = 0;
            for (long long x = 1; x <= 4; ++x)
                if (!ci.occupied(x) && cj.occupied(x)) entered = x;
            CHECK(std::min(vacated, entered) != 2);
        }
    }

    GeneratorMatrix frozen = generator_matrix(env, states, {1, 2, 3});
    CHECK(frozen.rate.empty());
    for (double d : frozen.diag) CHECK(d == 0.0);
}

TEST_CASE("single-particle stationary laws match birth-death closed forms") {
    SUBCASE("two sites") {
        double p = 0.65;
        StateEnumeration states(2, 1);
        Distribution pi = stationary(constant_env(p, 2), states);
        CHECK(pi.p[states.index(parse_configuration("01"))] ==
              doctest::Approx(p).epsilon(1e-12));
        CHECK(pi.p[states.index(parse_configuration("10"))] ==
              doctest::Approx(1 - p).epsilon(1e-12));
    }
    SUBCASE("three sites, geometric profile") {
        double p = 0.7, r = p / (1 - p);
        StateEnumeration states(3, 1);
        Distribution pi = stationary(constant_env(p, 3), states);
        double z = 1 + r + r * r;
        CHECK(pi.p[0] == doctest::Approx(1 / z).epsilon(1e-12));
        CHECK(pi.p[1] == doctest::Approx(r / z).epsilon(1e-12));
        CHECK(pi.p[2] == doctest::Approx(r * r / z).epsilon(1e-12));
    }
}

TEST_CASE("product form, null space and detailed balance agree") {
    for (uint64_t trial = 0; trial < 20; ++trial) {
        Environment env = sample_environment(EnvironmentLaw::uniform(0.55, 0.95), 6,
                                             subseed(808, trial));
        StateEnumeration states(6, 3);
        Distribution prod = stationary_product(env, states);
        Distribution null = stationary_nullspace(env, states);
        double worst = 0.0;
        for (size_t i = 0; i < prod.p.size(); ++i)
            worst = std::max(worst, std::abs(prod.p[i] - null.p[i]));
        CHECK(worst <= 1e-10);

        GeneratorMatrix gen = generator_matrix(env, states);
        CHECK(stationarity_residual(prod, gen) <= 1e-10);
        // detailed balance edge by edge
        for (size_t i = 0; i < gen.n; ++i) {
            for (size_t e = gen.row_ptr[i]; e < gen.row_ptr[i + 1]; ++e) {
                size_t j = gen.col[e];
                double back = 0.0;
                for (size_t f = gen.row_ptr[j]; f < gen.row_ptr[j + 1]; ++f)
                    if (gen.col[f] == i) back = gen.rate[f];
                CHECK(std::abs(prod.p[i] * gen.rate[e] - prod.p[j] * back) <= 1e-10);
            }
        }
    }
}

TEST_CASE("environments with saturated rates keep a valid stationary law") {
    // omega = 1 just right of the left quarter seals it off from the ground
    // state's communicating class
    std::vector<double> rates(8, 0.7);
    rates[2] = 1.0;  // site 3
    rates[3] = 1.0;  // site 4
    Environment env{rates, 1};
    StateEnumeration states(8, 2);
    Distribution pi = stationary(env, states);
    double mass = 0.0;
    for (double v : pi.p) {
        CHECK(v >= -1e-15);
        mass += v;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(stationarity_residual(pi, generator_matrix(env, states)) <= 1e-9);
    CHECK(stationary_left_quarter_prob(pi, states) <= 1e-15);
}

TEST_CASE("heat kernel is a true semigroup and stays a distribution") {
    Environment env = sample_environment(EnvironmentLaw::uniform(0.6, 0.9), 6, 17);
    StateEnumeration states(6, 3);
    GeneratorMatrix gen = generator_matrix(env, states);
    Distribution init = point_mass(states, top_state(6, 3));

    Distribution one_step = distribution_at(init, gen, 1.6);
    Distribution two_step = distribution_at(distribution_at(init, gen, 0.7), gen, 0.9);
    CHECK(tv_distance(one_step, two_step) <= 1e-9);

    double mass = 0.0;
    for (double v : one_step.p) {
        CHECK(v >= -1e-12);
        mass += v;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("two-site fair walk has the textbook transition law") {
    // stay probability 1/2 + exp(-t)/2 for the rate-1/2 flip pair
    Environment env = constant_env(0.5, 2);
    StateEnumeration states(2, 1);
    GeneratorMatrix gen = generator_matrix(env, states);
    Distribution d = distribution_at(point_mass(states, parse_configuration("10")), gen, 1.0);
    CHECK(d.p[states.index(parse_configuration("10"))] ==
          doctest::Approx(0.6839397205857212).epsilon(1e-9));

    CHECK(exact_mixing_time(env, states, 0.25) ==
          doctest::Approx(0.6931471805599453).epsilon(1e-6));
}

TEST_CASE("worst-case distance decays and vanishes at long times") {
    Environment env = sample_environment(EnvironmentLaw::uniform(0.6, 0.9), 5, 23);
    StateEnumeration states(5, 2);
    double prev = 2.0;
    for (double t : {0.2, 0.5, 1.0, 2.0, 4.0}) {
        double d = worst_case_tv(env, states, t);
        CHECK(d <= prev + 1e-12);
        prev = d;
    }
    StateEnumeration small(4, 2);
    Environment env4 = sample_environment(EnvironmentLaw::uniform(0.6, 0.9), 4, 24);
    CHECK(worst_case_tv(env4, small, 200.0) <= 1e-6);
}

TEST_CASE("mixing time brackets the threshold and is monotone in the accuracy") {
    Environment env = sample_environment(EnvironmentLaw::uniform(0.6, 0.9), 5, 29);
    StateEnumeration states(5, 2);
    double t14 = exact_mixing_time(env, states, 0.25);
    double t18 = exact_mixing_time(env, states, 0.125);
    CHECK(t18 >= t14 - 1e-6);
    CHECK(worst_case_tv(env, states, t14 + 1e-3) <= 0.25 + 1e-6);
    CHECK(worst_case_tv(env, states, t14 - 1e-3) >= 0.25 - 1e-6);
}

TEST_CASE("worst-case distance is controlled by the top-to-ground hitting tail") {
    Environment env = sample_environment(EnvironmentLaw::uniform(0.6, 0.9), 5, 31);
    StateEnumeration states(5, 2);
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        CHECK(worst_case_tv(env, states, t) <=
              hitting_tail(env, states, top_state(5, 2), ground_state(5, 2), t) + 1e-9);
    }
}

TEST_CASE("mean hitting time matches the hand value and the simulator") {
    Environment env = constant_env(0.75, 2);
    StateEnumeration states(2, 1);
    Configuration from = parse_configuration("10"), target = parse_configuration("01");
    double exact = mean_hitting_time(env, states, from, target);
    CHECK(exact == doctest::Approx(4.0 / 3.0).epsilon(1e-10));

    std::vector<double> samples;
    for (uint64_t r = 0; r < 3000; ++r) {
        EventStream stream = build_event_stream(1, 2, 100.0, subseed(37, r));
        auto hit = hitting_time_ground(from, env, stream, 100.0);
        REQUIRE(hit.has_value());
        samples.push_back(*hit);
    }
    MeanStderr ms = sample_mean(samples);
    CHECK(std::abs(ms.mean - exact) <= 3 * ms.stderr_);

    CHECK(hitting_tail(env, states, from, target, 1.0) ==
          doctest::Approx(0.4723665527410147).epsilon(1e-9));
    CHECK(hitting_tail(env, states, target, target, 5.0) <= 1e-9);
    CHECK(mean_hitting_time(env, states, target, target) == 0.0);
}

TEST_CASE("left-quarter bound has the constant-rate closed form") {
    // each factor is (1/4)/(3/4) = 1/3 and the best window is the shortest
    for (long long n : {8, 10, 12}) {
        Environment env = constant_env(0.75, n);
        long long span = (n + 1) / 2 - n / 4;
        double expected = static_cast<double>(n * n) * std::pow(3.0, -span);
        CHECK(left_quarter_stationary_bound(env, n, 2) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("left-quarter bound dominates the exact stationary probability") {
    for (uint64_t trial = 0; trial < 20; ++trial) {
        Environment env = sample_environment(EnvironmentLaw::uniform(0.55, 0.95), 8,
                                             subseed(911, trial));
        StateEnumeration states(8, 3);
        double exact = stationary_left_quarter_prob(stationary(env, states), states);
        CHECK(exact <= left_quarter_stationary_bound(env, 8, 3));
    }
    CHECK_THROWS_AS(left_quarter_stationary_bound(constant_env(0.7, 8), 8, 5),
                    std::invalid_argument);
}

TEST_CASE("distribution endpoints and validation") {
    StateEnumeration states(4, 2);
    Environment env = constant_env(0.8, 4);
    Distribution init = point_mass(states, top_state(4, 2));
    CHECK(init.p[states.index(top_state(4, 2))] == 1.0);
    GeneratorMatrix gen = generator_matrix(env, states);
    Distribution d0 = distribution_at(init, gen, 0.0);
    CHECK(tv_distance(init, d0) <= 1e-15);
    CHECK(tv_distance(init, point_mass(states, ground_state(4, 2))) ==
          doctest::Approx(1.0).epsilon(1e-15));
}

}  // TEST_SUITE
