#pragma once

#include <stdexcept>
#include <string>

namespace specreg {

// Vector length does not match the spectrum it is used with.
class PairingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or out-of-range configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A grid scan ran past k_max without meeting its stopping condition.
class ExhaustionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An instance was refused by the self-similarity gate.
class AdmissionError : public std::runtime_error {
public:
    AdmissionError(const std::string& what, double witness_alpha)
        : std::runtime_error(what), witness_alpha_(witness_alpha) {}

    [[nodiscard]] double witness_alpha() const noexcept { return witness_alpha_; }

private:
    double witness_alpha_;
};

}  // namespace specreg
