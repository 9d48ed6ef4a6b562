#pragma once

#include <stdexcept>
#include <string>

namespace mockpadic {

// Rejected input: malformed arguments, violated preconditions.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Two operands live in different coefficient domains (rational vs mod p^M,
// or residue rings with different moduli).
class DomainMismatch : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// Not enough q-expansion terms or p-adic digits to decide the requested
// quantity. `required` carries the bound that would have sufficed.
class PrecisionError : public std::runtime_error {
public:
    PrecisionError(const std::string& what, long required)
        : std::runtime_error(what + " (required: " + std::to_string(required) + ")"),
          required_(required) {}

    long required() const noexcept { return required_; }

private:
    long required_;
};

// A certificate (cusp orders, constant terms) could not be established.
class CertificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A structural obstruction in the form spaces, e.g. no representative with
// the requested pole order exists in the span of the available basis.
class Obstruction : public std::runtime_error {
public:
    Obstruction(const std::string& what, long suggestion)
        : std::runtime_error(what), suggestion_(suggestion) {}

    long suggestion() const noexcept { return suggestion_; }

private:
    long suggestion_;
};

// A computed quantity contradicts a proven statement; signals a bug in the
// construction rather than bad input.
class HardFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Working modulus or memory demand exceeds what the implementation supports.
class ResourceExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mockpadic
