#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace packing {

// mt19937_64 with explicit double/int mappings; std::uniform_*_distribution is
// implementation defined, so sequences would not be reproducible through it.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // [0, 1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // unbiased integer in [0, n)
    uint64_t below(uint64_t n);

    // k distinct values from [0, n), order random
    std::vector<int> sample_distinct(int k, int n);

private:
    std::mt19937_64 eng_;
};

}  // namespace packing
