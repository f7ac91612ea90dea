#include "sep/enumeration.hpp"

#include <limits>
#include <stdexcept>

namespace sep {

unsigned long long binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    constexpr unsigned long long kMax = std::numeric_limits<unsigned long long>::max();
    unsigned long long r = 1;
    for (long long i = 1; i <= k; ++i) {
        unsigned long long num = static_cast<unsigned long long>(n - k + i);
        if (r > kMax / num) return kMax;  // saturate
        r = r * num / static_cast<unsigned long long>(i);
    }
    return r;
}

StateEnumeration::StateEnumeration(long long n, int k, unsigned long long cap) : n_(n), k_(k) {
    if (n < 1 || k < 0 || k > n) throw std::invalid_argument("state space requires 0 <= k <= N");
    unsigned long long count = binomial(n, k);
    if (count > cap)
        throw std::invalid_argument("state space size " + std::to_string(count) +
                                    " exceeds cap " + std::to_string(cap));

    choose_.assign(static_cast<size_t>(n + 1),
                   std::vector<unsigned long long>(static_cast<size_t>(k + 1), 0));
    for (long long i = 0; i <= n; ++i) {
        choose_[static_cast<size_t>(i)][0] = 1;
        for (int j = 1; j <= k && j <= i; ++j)
            choose_[static_cast<size_t>(i)][static_cast<size_t>(j)] = binomial(i, j);
    }

    positions_.reserve(static_cast<size_t>(count));
    // colex: first state is {0,..,k-1}; advance like an odometer on the
    // lowest position that can move without colliding with the next one.
    std::vector<int> cur(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<size_t>(i)] = i;
    while (true) {
        positions_.push_back(cur);
        int i = 0;
        while (i < k) {
            int limit = (i + 1 < k) ? cur[static_cast<size_t>(i + 1)] : static_cast<int>(n);
            if (cur[static_cast<size_t>(i)] + 1 < limit) break;
            ++i;
        }
        if (i == k) break;
        ++cur[static_cast<size_t>(i)];
        for (int j = 0; j < i; ++j) cur[static_cast<size_t>(j)] = j;
    }
}

Configuration StateEnumeration::config(size_t i) const {
    std::vector<uint8_t> occ(static_cast<size_t>(n_), 0);
    for (int p : positions_[i]) occ[static_cast<size_t>(p)] = 1;
    return Configuration(std::move(occ));
}

size_t StateEnumeration::index(const std::vector<int>& positions0) const {
    if (static_cast<int>(positions0.size()) != k_)
        throw std::invalid_argument("position list has wrong particle count");
    unsigned long long r = 0;
    for (int i = 0; i < k_; ++i) {
        int c = positions0[static_cast<size_t>(i)];
        if (c < 0 || c >= n_) throw std::out_of_range("particle position outside the segment");
        r += choose_[static_cast<size_t>(c)][static_cast<size_t>(i + 1)];
    }
    return static_cast<size_t>(r);
}

size_t StateEnumeration::index(const Configuration& c) const {
    if (c.size() != n_ || c.particles() != k_ || c.first_site() != 1)
        throw std::invalid_argument("configuration does not belong to this state space");
    std::vector<int> pos;
    pos.reserve(static_cast<size_t>(k_));
    for (long long x = 1; x <= n_; ++x)
        if (c.occupied(x)) pos.push_back(static_cast<int>(x - 1));
    return index(pos);
}

}  // namespace sep
