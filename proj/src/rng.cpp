#include "circlepack/rng.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace packing {

uint64_t Rng::below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const uint64_t limit =
        std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
    uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return v % n;
}

std::vector<int> Rng::sample_distinct(int k, int n) {
    if (k < 0 || k > n) throw std::invalid_argument("Rng::sample_distinct: bad k");
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    // partial Fisher-Yates
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(below(static_cast<uint64_t>(n - i)));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace packing
