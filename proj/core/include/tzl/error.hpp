#pragma once

#include <stdexcept>
#include <string>

namespace tzl {

/// Input violates a documented precondition (bad symbol, p out of range, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its target tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw PreconditionError(message);
}

} // namespace tzl
