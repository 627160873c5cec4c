#pragma once

#include <stdexcept>
#include <string>

namespace dhl {

// Parameter regime does not admit the requested quantity (e.g. s <= b
// where the construction needs s > b).
struct RegimeError : std::domain_error {
    explicit RegimeError(const std::string& what) : std::domain_error(what) {}
};

// An iteration left the convergent regime (value escaped or the Cauchy
// test failed at the iteration cap).
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// A request exceeded a configured size/degree cap.
struct SizeCapError : std::length_error {
    explicit SizeCapError(const std::string& what) : std::length_error(what) {}
};

// Malformed or out-of-range hierarchical address.
struct AddressError : std::invalid_argument {
    explicit AddressError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace dhl
