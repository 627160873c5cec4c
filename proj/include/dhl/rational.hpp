#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace dhl {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline BigInt ipow(BigInt base, std::uint64_t exp) {
    BigInt r = 1;
    while (exp) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

inline BigRational rpow(const BigRational& base, std::uint64_t exp) {
    BigRational r = 1;
    BigRational b = base;
    while (exp) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

inline double to_double(const BigRational& q) { return q.convert_to<double>(); }

}  // namespace dhl
