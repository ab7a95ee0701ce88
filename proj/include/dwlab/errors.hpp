#pragma once

#include <stdexcept>
#include <string>

namespace dwlab {

/// Configuration or model precondition failure. Maps to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Finite-time blow-up detected by the solver. A reportable outcome, not a bug.
/// Maps to exit code 3.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double t, double amplitude)
        : std::runtime_error("solution amplitude exceeded ceiling at t=" + std::to_string(t)),
          t_blowup(t), amplitude(amplitude) {}
    double t_blowup;
    double amplitude;
};

/// Anything else that should abort a pipeline. Maps to exit code 4.
class InternalError : public std::runtime_error {
public:
    explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dwlab
