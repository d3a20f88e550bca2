#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace orlicz {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (negative x, foreign piece, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed or invalid descriptor. `field()` is a JSON pointer to the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// sup_x (x*y - phi(x)) did not stay bounded within the bracket cap.
class UnboundedConjugateError : public Error {
public:
    explicit UnboundedConjugateError(double y)
        : Error("conjugate is unbounded at y = " + std::to_string(y)), y_(y) {}

    double y() const noexcept { return y_; }

private:
    double y_;
};

/// The modular is infinite for every scale, so the function is not in the space.
class NotInSpaceError : public Error {
public:
    using Error::Error;
};

/// A value rule combination that cannot be represented or decided.
class UnsupportedRuleError : public Error {
public:
    using Error::Error;
};

class NotNonatomicError : public Error {
public:
    using Error::Error;
};

class DepthExhaustedError : public Error {
public:
    DepthExhaustedError(int required, int limit)
        : Error("dyadic refinement needs depth " + std::to_string(required) + " but the limit is " +
                std::to_string(limit)),
          required_(required) {}

    int required_depth() const noexcept { return required_; }

private:
    int required_;
};

/// A theorem hypothesis checked at run time does not hold.
class HypothesisError : public Error {
public:
    using Error::Error;
};

}  // namespace orlicz
