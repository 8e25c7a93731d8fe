#ifndef STH_ERROR_HPP
#define STH_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace sth {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid distribution or system parameters, raised at construction.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Result would overflow the representable range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Numerical procedure failed to reach its tolerance. Carries the best
/// value obtained and its error bound so callers can decide what to do.
class NumericalError : public Error {
public:
    NumericalError(std::string what, double partial_value, double error_bound)
        : Error(std::move(what)), partial_value_(partial_value), error_bound_(error_bound) {}

    double partial_value() const noexcept { return partial_value_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double partial_value_;
    double error_bound_;
};

namespace detail {

inline void require(bool ok, const char* message) {
    if (!ok) throw ParameterError(message);
}

}  // namespace detail

}  // namespace sth

#endif
