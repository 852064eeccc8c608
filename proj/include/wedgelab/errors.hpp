#pragma once

#include <stdexcept>
#include <string>

namespace wedgelab {

// Raised when an exhaustive computation would exceed its configured budget.
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Raised by decompose() when the input bivector is not of the form u^v.
struct NotDecomposable : std::runtime_error {
    explicit NotDecomposable(const std::string& what) : std::runtime_error(what) {}
};

// Raised by psi() when the wedge tuple fails to span an r-dimensional space.
struct IndeterminacyLocus : std::runtime_error {
    explicit IndeterminacyLocus(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wedgelab
