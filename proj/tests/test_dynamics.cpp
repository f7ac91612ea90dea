#include <doctest.h>

#include <cmath>
#include <vector>

#include "sep/configuration.hpp"
#include "sep/dynamics.hpp"
#include "sep/enumeration.hpp"
#include "sep/environment.hpp"
#include "sep/event_stream.hpp"
#include "sep/exact.hpp"
#include "sep/law.hpp"
#include "sep/rng.hpp"

using namespace sep;

namespace {

Environment constant_env(double w, long long n, long long first = 1) {
    return Environment{std::vector<double>(static_cast<size_t>(n), w), first};
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("single event semantics on hand cases") {
    Environment env = constant_env(0.7, 3);
    Configuration c = parse_configuration("110");

    SUBCASE("head moves right when the mark allows and the target is empty") {
        SiteEvent ev{0.1, 2, true, 0.5};
        CHECK(apply_event(c, env, ev));
        CHECK(format_configuration(c) == "101");
    }
    SUBCASE("head fails above the rate") {
        SiteEvent ev{0.1, 2, true, 0.9};
        CHECK_FALSE(apply_event(c, env, ev));
        CHECK(format_configuration(c) == "110");
    }
    SUBCASE("tail blocked by occupied target") {
        SiteEvent ev{0.1, 2, false, 0.9};
        CHECK_FALSE(apply_event(c, env, ev));
    }
    SUBCASE("boundary rings pointing outward are no-ops") {
        Configuration d = parse_configuration("101");
        SiteEvent right_end{0.1, 3, true, 0.01};
        CHECK_FALSE(apply_event(d, env, right_end));
        SiteEvent left_end{0.1, 1, false, 0.99};
        CHECK_FALSE(apply_event(d, env, left_end));
    }
    SUBCASE("empty site never produces a move") {
        Configuration d = parse_configuration("101");
        SiteEvent ev{0.1, 2, true, 0.01};
        CHECK_FALSE(apply_event(d, env, ev));
    }
}

TEST_CASE("right-packed state absorbs arbitrary head rings") {
    Environment env = constant_env(0.9, 4);
    Configuration c = ground_state(4, 2);
    for (long long x = 1; x <= 4; ++x) {
        SiteEvent ev{0.1, x, true, 0.0};
        apply_event(c, env, ev);
    }
    CHECK(c == ground_state(4, 2));
}

TEST_CASE("evolution at t = 0 is the identity and conserves particles") {
    Environment env = sample_environment(EnvironmentLaw::uniform(0.6, 0.9), 9, 4);
    EventStream stream = build_event_stream(1, 9, 30.0, 8);
    Configuration c0 = top_state(9, 4);
    CHECK(evolve(c0, env, stream, 0.0) == c0);
    Configuration ct = evolve(c0, env, stream, 30.0);
    CHECK(ct.particles() == 4);
    CHECK(ct.size() == 9);
}

TEST_CASE("single particle in a pure-drift environment matches the exact law") {
    Environment env = constant_env(1.0, 5);
    StateEnumeration states(5, 1);
    GeneratorMatrix gen = generator_matrix(env, states);
    std::vector<uint8_t> start{1, 0, 0, 0, 0};
    Distribution exact = distribution_at(point_mass(states, Configuration(start, 1)), gen, 1.0);

    const int replicas = 100'000;
    std::vector<double> emp(states.size(), 0.0);
    for (int r = 0; r < replicas; ++r) {
        EventStream stream =
            build_event_stream(1, 5, 1.0, subseed(31, static_cast<uint64_t>(r)));
        Configuration c = evolve(Configuration(start, 1), env, stream, 1.0);
        emp[states.index(c)] += 1.0;
    }
    double tv = 0.0;
    for (size_t i = 0; i < emp.size(); ++i)
        tv += std::abs(emp[i] / replicas - exact.p[i]);
    CHECK(tv / 2.0 <= 0.01);
}

TEST_CASE("two-particle marginal matches the exact law in a random environment") {
    Environment env = sample_environment(EnvironmentLaw::uniform(0.6, 0.9), 5, 4);
    StateEnumeration states(5, 2);
    GeneratorMatrix gen = generator_matrix(env, states);
    Configuration init = top_state(5, 2);
    Distribution exact = distribution_at(point_mass(states, init), gen, 0.8);

    const int replicas = 40'000;
    std::vector<double> emp(states.size(), 0.0);
    for (int r = 0; r < replicas; ++r) {
        EventStream stream =
            build_event_stream(1, 5, 0.8, subseed(17, static_cast<uint64_t>(r)));
        emp[states.index(evolve(init, env, stream, 0.8))] += 1.0;
    }
    double tv = 0.0;
    for (size_t i = 0; i < emp.size(); ++i)
        tv += std::abs(emp[i] / replicas - exact.p[i]);
    CHECK(tv / 2.0 <= 0.015);
}

TEST_CASE("extremal pair stays ordered under the shared stream") {
    long long total_violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        uint64_t s = subseed(4242, static_cast<uint64_t>(trial));
        Environment env = sample_environment(EnvironmentLaw::uniform(0.55, 1.0), 6, s);
        int k = 1 + trial % 5;
        EventStream stream = build_event_stream(1, 6, 5.0, subseed(s, 0x6d6f6e));
        CouplingMonitor monitor;
        monitor.pairs = {{0, 1}};
        std::vector<Configuration> out = evolve_coupled(
            {ground_state(6, k), top_state(6, k)}, {env}, stream, 5.0, &monitor);
        total_violations += monitor.violations;
        CHECK(leq(out[0], out[1]));
    }
    CHECK(total_violations == 0);
}

TEST_CASE("faster drift stays below in the prefix order") {
    // same start, rates raised pointwise: stronger right drift pushes the
    // copy toward the right-packed minimum, so it stays below the slow copy
    long long violations = 0;
    for (int trial = 0; trial < 400; ++trial) {
        uint64_t s = subseed(99, static_cast<uint64_t>(trial));
        Environment slow = sample_environment(EnvironmentLaw::uniform(0.55, 0.8), 6, s);
        Environment fast = slow;
        for (double& w : fast.rates) w = std::min(1.0, w + 0.15);
        EventStream stream = build_event_stream(1, 6, 4.0, subseed(s, 0x656e76));
        CouplingMonitor monitor;
        monitor.pairs = {{0, 1}};  // fast below slow
        std::vector<Configuration> out = evolve_coupled(
            {top_state(6, 2), top_state(6, 2)}, {fast, slow}, stream, 4.0, &monitor);
        violations += monitor.violations;
        CHECK(leq(out[0], out[1]));
    }
    CHECK(violations == 0);
}

TEST_CASE("coalescence merges the trajectories for good") {
    Environment env = sample_environment(EnvironmentLaw::uniform(0.6, 0.9), 7, 21);
    EventStream stream = build_event_stream(1, 7, 500.0, 22);
    std::optional<double> tau = coalescence_time(env, 3, stream, 500.0);
    REQUIRE(tau.has_value());
    CHECK(*tau > 0.0);
    // evolve both extremes past the coalescence time on the same stream
    double later = *tau + 1.0;
    Configuration a = evolve(top_state(7, 3), env, stream, later);
    Configuration b = evolve(ground_state(7, 3), env, stream, later);
    CHECK(a == b);

    // deterministic in the seed
    CHECK(coalescence_time(env, 3, stream, 500.0) == tau);
}

TEST_CASE("coalescence never exceeds the ground-hitting time on a shared stream") {
    for (int trial = 0; trial < 50; ++trial) {
        uint64_t s = subseed(1234, static_cast<uint64_t>(trial));
        Environment env = sample_environment(EnvironmentLaw::uniform(0.65, 0.95), 6, s);
        EventStream stream = build_event_stream(1, 6, 2000.0, subseed(s, 0x68697467));
        std::optional<double> hit =
            hitting_time_ground(top_state(6, 2), env, stream, 2000.0);
        std::optional<double> coal = coalescence_time(env, 2, stream, 2000.0);
        REQUIRE(hit.has_value());
        REQUIRE(coal.has_value());
        CHECK(*coal <= *hit);
    }
}

TEST_CASE("ground hitting from the ground state is immediate") {
    Environment env = constant_env(0.8, 5);
    EventStream stream = build_event_stream(1, 5, 10.0, 3);
    std::optional<double> hit = hitting_time_ground(ground_state(5, 2), env, stream, 10.0);
    REQUIRE(hit.has_value());
    CHECK(*hit == 0.0);
}

TEST_CASE("window runs conserve particles and flag boundary contact") {
    // sea on the right, two free particles; window wide enough for a short run
    std::vector<uint8_t> occ;
    for (long long x = -6; x <= 12; ++x) occ.push_back((x >= 1 && x <= 2) || x > 8);
    Configuration eta0(occ, -6);
    Environment env = sample_environment(EnvironmentLaw::uniform(0.6, 0.9), 19, 5);
    Environment wenv = shift(env, -7);  // window [-6, 12]
    EventStream stream = build_event_stream(-6, 12, 3.0, 6);
    WindowRun run = evolve_window(eta0, wenv, stream, 3.0);
    CHECK(run.config.particles() == eta0.particles());

    // a particle already on the left edge flags immediately
    std::vector<uint8_t> touching(occ);
    touching.front() = 1;
    WindowRun flagged =
        evolve_window(Configuration(touching, -6), wenv, stream, 0.5);
    CHECK(flagged.boundary_touched);
}

TEST_CASE("window hitting reaches the packed sea state") {
    // window [-6, 10], segment n = 4, k = 2: start 1{x in [2]} + 1{x > 4},
    // target 1{x > 2}
    std::vector<uint8_t> start_occ, target_occ;
    for (long long x = -6; x <= 10; ++x) {
        start_occ.push_back((x >= 1 && x <= 2) || x > 4);
        target_occ.push_back(x > 2);
    }
    Configuration start(start_occ, -6), target(target_occ, -6);
    Environment wenv = shift(
        sample_environment(EnvironmentLaw::uniform(0.7, 0.95), 17, 31), -7);
    EventStream stream = build_event_stream(-6, 10, 400.0, 32);
    WindowHit hit = window_hitting_time(start, target, wenv, stream, 400.0);
    REQUIRE(hit.hit.has_value());
    CHECK(*hit.hit > 0.0);

    WindowHit trivial = window_hitting_time(target, target, wenv, stream, 400.0);
    REQUIRE(trivial.hit.has_value());
    CHECK(*trivial.hit == 0.0);
}

TEST_CASE("leftmost sample path agrees with a direct run on the same stream") {
    Environment env = sample_environment(EnvironmentLaw::uniform(0.6, 0.9), 30, 77);
    Configuration eta0 = top_state(30, 5);
    EventStream stream = build_event_stream(1, 30, 6.0, 78);
    std::vector<double> times{0.5, 1.5, 3.0, 6.0};
    std::vector<long long> lm = leftmost_at_times(eta0, env, stream, nullptr, times);
    REQUIRE(lm.size() == times.size());
    CHECK(lm.front() >= 1);
    for (size_t i = 0; i < times.size(); ++i) {
        Configuration ci = evolve(eta0, env, stream, times[i]);
        CHECK(lm[i] == leftmost_particle(ci));
    }
}

}  // TEST_SUITE
