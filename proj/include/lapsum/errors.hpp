#pragma once

#include <stdexcept>
#include <string>

namespace lapsum {

/// Violated input contract (bad parameter, point outside a continuation
/// domain, malformed serialized data).
class precondition_error : public std::invalid_argument {
public:
    explicit precondition_error(const std::string& what)
        : std::invalid_argument(what) {}
};

/// An iterative numeric routine hit its cap before reaching tolerance.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what)
        : std::runtime_error(what) {}
};

/// A search exhausted its declared budget.
class budget_error : public std::runtime_error {
public:
    explicit budget_error(const std::string& what)
        : std::runtime_error(what) {}
};

/// Monotone-margin check failed; carries the minimal admissible offset.
class insufficient_margin_error : public precondition_error {
public:
    insufficient_margin_error(const std::string& what, double a_min)
        : precondition_error(what), a_min(a_min) {}
    double a_min;
};

} // namespace lapsum
