#pragma once

#include <stdexcept>
#include <string>

namespace nhberry {

// Physics-domain failure: exceptional-point proximity, vanishing survival
// probability, log singularities. CLI maps these to exit code 2.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: step-size underflow, non-finite state. Exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nhberry
