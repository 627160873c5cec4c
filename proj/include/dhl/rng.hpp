#pragma once

#include <cmath>
#include <cstdint>

namespace dhl {

// Counter-based splittable generator. Every consumer derives its own
// stream from (seed, stream ids); a draw is a pure function of
// (key, counter), so deepening a noise tree or re-sharding a Monte Carlo
// job never perturbs draws made elsewhere.
class SplitRng {
  public:
    explicit SplitRng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ull)) {}

    // Child stream; deterministic in (parent key, ids).
    SplitRng derive(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
        SplitRng child(0);
        std::uint64_t k = key_;
        k = mix(k ^ mix(a ^ 0x9e3779b97f4a7c15ull));
        k = mix(k ^ mix(b ^ 0xbf58476d1ce4e5b9ull));
        k = mix(k ^ mix(c ^ 0x94d049bb133111ebull));
        child.key_ = k;
        child.ctr_ = 0;
        return child;
    }

    std::uint64_t next_u64() { return mix(key_ ^ (0x9e3779b97f4a7c15ull * ++ctr_)); }

    // Uniform on (0, 1]; never returns 0 so logs are safe.
    double uniform01() {
        return (double(next_u64() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
    }

    // Uniform on {0, 1, ..., n-1}.
    std::uint32_t uniform_int(std::uint32_t n) {
        return std::uint32_t((__uint128_t(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller; two uniforms per draw, no cached
    // spare, so the draw count per consumer is deterministic.
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

}  // namespace dhl
