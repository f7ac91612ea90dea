#include "sep/environment.hpp"

#include <stdexcept>

#include "sep/rng.hpp"

namespace sep {

double Environment::at(long long site) const {
    if (!contains(site))
        throw std::out_of_range("environment queried outside its window: site " +
                                std::to_string(site));
    return rates[static_cast<size_t>(site - first_site)];
}

Environment sample_environment(const EnvironmentLaw& law, long long n, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("environment length must be positive");
    Environment env;
    env.first_site = 1;
    env.rates.resize(static_cast<size_t>(n));
    SplitMix64 rng(subseed(seed, /*tag=*/0x656e76));
    for (auto& r : env.rates) r = law.draw(rng);
    return env;
}

Environment shift(const Environment& env, long long n) {
    Environment out = env;
    out.first_site += n;
    return out;
}

void validate_environment(const Environment& env) {
    if (env.size() < 2) throw std::invalid_argument("environment must cover at least 2 sites");
    for (double r : env.rates)
        if (!(r > 0.0 && r <= 1.0))
            throw std::invalid_argument("environment rate outside (0,1]");
}

}  // namespace sep
