#pragma once

#include <cstdint>
#include <stdexcept>

#include "dhl/errors.hpp"

namespace dhl {

// The (b, s) pair driving every recursion: b parallel branches, each a
// series of s segments.
struct LatticeParams {
    int b = 2;
    int s = 3;

    LatticeParams() = default;
    LatticeParams(int b_, int s_) : b(b_), s(s_) {
        if (b < 2 || s < 2) throw std::invalid_argument("LatticeParams: need b >= 2 and s >= 2");
    }

    // Subcritical GMC constructions additionally need s > b.
    bool gmc_regime() const { return s > b; }

    void require_gmc_regime(const char* where) const {
        if (!gmc_regime()) throw RegimeError(std::string(where) + ": requires s > b");
    }

    double ratio() const { return double(b) / double(s); }  // b/s < 1 in the GMC regime

    // s^n, guarded against 64-bit overflow.
    std::uint64_t segments(int n) const {
        std::uint64_t r = 1;
        for (int i = 0; i < n; ++i) {
            if (r > UINT64_MAX / std::uint64_t(s)) throw SizeCapError("segments: s^n overflows 64 bits");
            r *= std::uint64_t(s);
        }
        return r;
    }

    // (bs)^n, number of level-n cells, guarded.
    std::uint64_t cells(int n) const {
        std::uint64_t bs = std::uint64_t(b) * std::uint64_t(s);
        std::uint64_t r = 1;
        for (int i = 0; i < n; ++i) {
            if (r > UINT64_MAX / bs) throw SizeCapError("cells: (bs)^n overflows 64 bits");
            r *= bs;
        }
        return r;
    }

    // Number of branch decisions in a level-n coarse path: (s^n - 1)/(s - 1).
    std::uint64_t decision_count(int n) const {
        std::uint64_t total = 0, pw = 1;
        for (int k = 0; k < n; ++k) {
            total += pw;
            pw *= std::uint64_t(s);
        }
        return total;
    }

    friend bool operator==(const LatticeParams&, const LatticeParams&) = default;
};

}  // namespace dhl
