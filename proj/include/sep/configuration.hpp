#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sep {

// Occupancy configuration on a segment [1,N] or on a window of the integers.
// Values are 0/1; the particle count is cached.
class Configuration {
  public:
    Configuration() = default;
    Configuration(std::vector<uint8_t> occupancy, long long first_site = 1);

    long long size() const { return static_cast<long long>(occ_.size()); }
    long long first_site() const { return first_; }
    long long last_site() const { return first_ + size() - 1; }
    int particles() const { return k_; }

    bool occupied(long long site) const { return occ_[static_cast<size_t>(site - first_)] != 0; }
    void set(long long site, bool value);

    const std::vector<uint8_t>& bits() const { return occ_; }
    uint8_t* data() { return occ_.data(); }
    const uint8_t* data() const { return occ_.data(); }

    bool operator==(const Configuration& other) const = default;

  private:
    std::vector<uint8_t> occ_;
    long long first_ = 1;
    int k_ = 0;
};

// All k particles packed at the right end / left end of [1,N]. These are the
// minimum and maximum of the partial order below.
Configuration ground_state(long long n, int k);
Configuration top_state(long long n, int k);

// Prefix-sum partial order: a <= b iff every prefix sum of a is <= b's,
// i.e. each of a's particles sits weakly to the right of b's.
// Throws on mismatched site ranges or particle counts.
bool leq(const Configuration& a, const Configuration& b);

// Site of the leftmost particle / the rightmost empty site.
long long leftmost_particle(const Configuration& c);
long long rightmost_empty(const Configuration& c);

// True iff some site x <= floor(N/4) is occupied (the left-quarter event used
// by the stationary lower-bound diagnostics). The configuration must start at
// site 1.
bool occupies_left_quarter(const Configuration& c, long long n);

// Height profile H(x) = (prefix sum at x) - x*k/N for x in [1, N-1], stored
// exactly as integers scaled by N. Order-isomorphic to the configuration
// order and injective.
struct HeightProfile {
    long long denom = 1;             // N
    std::vector<long long> scaled;   // scaled[x-1] = N*H(x)

    double value(long long x) const {
        return static_cast<double>(scaled[static_cast<size_t>(x - 1)]) /
               static_cast<double>(denom);
    }
};

HeightProfile height(const Configuration& c);

// Textual literal, e.g. "0011"; parse throws on anything but 0/1 characters.
std::string format_configuration(const Configuration& c);
Configuration parse_configuration(const std::string& text, long long first_site = 1);

}  // namespace sep
