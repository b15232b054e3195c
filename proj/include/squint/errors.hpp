#pragma once

#include <stdexcept>
#include <string>

namespace squint {

/// Argument outside an operation's domain (negative variance, NaN, bad epsilon...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A linear-domain value is not representable as a finite double.
class OverflowError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Vector lengths disagree with the game's expert count.
class LengthError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A runtime invariant of the game or of a solver failed.
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace squint
