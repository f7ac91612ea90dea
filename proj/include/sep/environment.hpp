#pragma once

#include <cstdint>
#include <vector>

#include "sep/law.hpp"

namespace sep {

// A fixed environment: the right-jump rate omega(x) for each site of a
// segment or a finite window of the integers. Site x lives at index
// x - first_site; access outside the window throws.
struct Environment {
    std::vector<double> rates;
    long long first_site = 1;

    long long size() const { return static_cast<long long>(rates.size()); }
    long long last_site() const { return first_site + size() - 1; }

    bool contains(long long site) const { return site >= first_site && site <= last_site(); }

    double at(long long site) const;

    bool operator==(const Environment& other) const = default;
};

// N i.i.d. draws from the law, deterministic given the seed. Sites 1..N.
Environment sample_environment(const EnvironmentLaw& law, long long n, uint64_t seed);

// The environment translated right by n: result(x) = env(x - n).
Environment shift(const Environment& env, long long n);

// Validates entries in (0,1] and length >= 2; throws otherwise.
void validate_environment(const Environment& env);

}  // namespace sep
