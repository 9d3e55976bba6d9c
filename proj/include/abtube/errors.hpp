#pragma once

#include <stdexcept>
#include <string>

namespace abtube {

// Invalid configuration, failed precondition, or malformed input.
// CLI maps this family to exit code 1.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// File-system failure while reading configs or writing results. Exit code 1.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite amplitudes appeared during propagation. Exit code 2.
class blowup_error : public std::runtime_error {
public:
    explicit blowup_error(const std::string& msg, long step_index = -1)
        : std::runtime_error(msg), step_index(step_index) {}
    long step_index;
};

// A physics bookkeeping check failed: energy audit, overlap-modulus
// (model violation), confinement leak, or a validation probe. Exit code 3.
class audit_error : public std::runtime_error {
public:
    explicit audit_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace abtube
