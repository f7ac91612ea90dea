#include "sep/configuration.hpp"

#include <numeric>
#include <stdexcept>

namespace sep {

Configuration::Configuration(std::vector<uint8_t> occupancy, long long first_site)
    : occ_(std::move(occupancy)), first_(first_site) {
    k_ = 0;
    for (auto& v : occ_) {
        if (v > 1) throw std::invalid_argument("occupancy values must be 0 or 1");
        k_ += v;
    }
}

void Configuration::set(long long site, bool value) {
    auto& slot = occ_[static_cast<size_t>(site - first_)];
    k_ += static_cast<int>(value) - static_cast<int>(slot);
    slot = value ? 1 : 0;
}

Configuration ground_state(long long n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("particle count outside [0, N]");
    std::vector<uint8_t> occ(static_cast<size_t>(n), 0);
    for (long long i = n - k; i < n; ++i) occ[static_cast<size_t>(i)] = 1;
    return Configuration(std::move(occ));
}

Configuration top_state(long long n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("particle count outside [0, N]");
    std::vector<uint8_t> occ(static_cast<size_t>(n), 0);
    for (long long i = 0; i < k; ++i) occ[static_cast<size_t>(i)] = 1;
    return Configuration(std::move(occ));
}

bool leq(const Configuration& a, const Configuration& b) {
    if (a.first_site() != b.first_site() || a.size() != b.size())
        throw std::invalid_argument("order comparison across different windows");
    if (a.particles() != b.particles())
        throw std::invalid_argument("order comparison across different particle counts");
    long long pa = 0, pb = 0;
    for (long long x = a.first_site(); x <= a.last_site(); ++x) {
        pa += a.occupied(x);
        pb += b.occupied(x);
        if (pa > pb) return false;
    }
    return true;
}

long long leftmost_particle(const Configuration& c) {
    for (long long x = c.first_site(); x <= c.last_site(); ++x)
        if (c.occupied(x)) return x;
    throw std::invalid_argument("empty configuration has no leftmost particle");
}

long long rightmost_empty(const Configuration& c) {
    for (long long x = c.last_site(); x >= c.first_site(); --x)
        if (!c.occupied(x)) return x;
    throw std::invalid_argument("full configuration has no empty site");
}

bool occupies_left_quarter(const Configuration& c, long long n) {
    if (c.first_site() != 1)
        throw std::invalid_argument("left-quarter event is defined for segments starting at 1");
    long long quarter = n / 4;
    for (long long x = 1; x <= quarter && x <= c.last_site(); ++x)
        if (c.occupied(x)) return true;
    return false;
}

HeightProfile height(const Configuration& c) {
    if (c.first_site() != 1)
        throw std::invalid_argument("height profile is defined for segments starting at 1");
    long long n = c.size();
    long long k = c.particles();
    HeightProfile h;
    h.denom = n;
    h.scaled.resize(static_cast<size_t>(n > 0 ? n - 1 : 0));
    long long prefix = 0;
    for (long long x = 1; x < n; ++x) {
        prefix += c.occupied(x);
        h.scaled[static_cast<size_t>(x - 1)] = n * prefix - x * k;
    }
    return h;
}

std::string format_configuration(const Configuration& c) {
    std::string s;
    s.reserve(static_cast<size_t>(c.size()));
    for (long long x = c.first_site(); x <= c.last_site(); ++x)
        s.push_back(c.occupied(x) ? '1' : '0');
    return s;
}

Configuration parse_configuration(const std::string& text, long long first_site) {
    if (text.empty()) throw std::invalid_argument("empty configuration literal");
    std::vector<uint8_t> occ;
    occ.reserve(text.size());
    for (char ch : text) {
        if (ch != '0' && ch != '1')
            throw std::invalid_argument("configuration literal must be 0/1 characters");
        occ.push_back(ch == '1' ? 1 : 0);
    }
    return Configuration(std::move(occ), first_site);
}

}  // namespace sep
