#pragma once

#include <cstdint>
#include <vector>

#include "sep/configuration.hpp"

namespace sep {

// C(n,k) with overflow saturation to the max representable value.
unsigned long long binomial(long long n, long long k);

// Colexicographic enumeration of the k-subsets of [1,N], i.e. of all
// configurations with k particles. index() inverts it via the combinatorial
// number system. Throws if C(N,k) exceeds the cap.
class StateEnumeration {
  public:
    static constexpr unsigned long long kDefaultCap = 20000;

    StateEnumeration(long long n, int k, unsigned long long cap = kDefaultCap);

    long long n() const { return n_; }
    int k() const { return k_; }
    size_t size() const { return positions_.size(); }

    // 0-based particle positions (sites minus one), ascending, of state i.
    const std::vector<int>& positions(size_t i) const { return positions_[i]; }

    Configuration config(size_t i) const;
    size_t index(const Configuration& c) const;
    size_t index(const std::vector<int>& positions0) const;

  private:
    long long n_;
    int k_;
    std::vector<std::vector<int>> positions_;
    std::vector<std::vector<unsigned long long>> choose_;  // choose_[n][k]
};

}  // namespace sep
