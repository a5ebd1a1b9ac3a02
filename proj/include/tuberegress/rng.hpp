#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace tuberegress {

// splitmix64 step, used both for seed mixing and stream derivation.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derive an independent child seed from (seed, tag). All per-fold / per-tree /
// per-trial streams are derived this way so parallel and serial runs agree.
inline uint64_t derive_seed(uint64_t seed, uint64_t tag) {
    uint64_t s = seed ^ (0xA0761D6478BD642FULL * (tag + 1));
    splitmix64(s);
    return splitmix64(s);
}

// Deterministic RNG. mt19937_64 is engine-portable by the standard; the
// distribution functions are written out here because std:: distributions are
// implementation-defined and would break byte-identical artifacts.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // uniform in [0,1) with 53 random bits
    double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n), unbiased via rejection
    uint64_t uniform_below(uint64_t n) {
        if (n <= 1) return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // standard normal, polar Box-Muller
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Fisher-Yates prefix: after the call the first `take` elements are a
    // uniform sample without replacement, in draw order.
    template <typename T>
    void partial_shuffle(std::vector<T>& v, size_t take) {
        if (take > v.size()) take = v.size();
        for (size_t i = 0; i < take; ++i) {
            size_t j = i + static_cast<size_t>(uniform_below(v.size() - i));
            std::swap(v[i], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace tuberegress
