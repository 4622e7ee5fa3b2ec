#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace aqc {

// splitmix64 finalizer; used to derive independent child seeds from a
// master seed and an index path, so parallel workers never share a stream.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix64(master);
    for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
    return s;
}

// Stream tags keep derived seeds for distinct purposes disjoint.
namespace seed_tag {
constexpr std::uint64_t target = 1;
constexpr std::uint64_t trial = 2;
constexpr std::uint64_t init = 3;
constexpr std::uint64_t sketch = 4;
constexpr std::uint64_t monitor = 5;
constexpr std::uint64_t sample = 6;
}  // namespace seed_tag

/// Seeded random stream. Uniform and normal variates are generated from the
/// raw 64-bit output with fixed arithmetic, so sequences are identical across
/// standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1)
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // standard normal, Marsaglia polar method
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace aqc
