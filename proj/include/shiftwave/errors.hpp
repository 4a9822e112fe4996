/*
 * Error types for the shiftwave toolkit.
 *
 * Everything derives from shiftwave::Error so callers can catch the
 * whole family; the CLI maps the subfamilies onto exit codes.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace shiftwave {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// bad configuration, bad file, bad usage
class ConfigError : public Error {
public:
    using Error::Error;
};

// a construction hypothesis or operation precondition does not hold
class HypothesisViolation : public Error {
public:
    HypothesisViolation(std::string condition, const std::string& detail)
        : Error("hypothesis violation [" + condition + "]: " + detail),
          condition_(std::move(condition)) {}
    const std::string& condition() const { return condition_; }

private:
    std::string condition_;
};

class PrerequisiteViolation : public Error {
public:
    using Error::Error;
};

// supercritical constructor called at/below the critical speed, or vice versa
class SpeedRegimeMismatch : public Error {
public:
    using Error::Error;
};

// characteristic polynomial has no real roots (speed below minimal)
class NoRealRoots : public Error {
public:
    using Error::Error;
};

class BreakpointDerivative : public Error {
public:
    using Error::Error;
};

class GridTouchesBreakpoint : public Error {
public:
    using Error::Error;
};

class GammaOutOfRange : public Error {
public:
    using Error::Error;
};

// monotone iteration produced a non-decreasing iterate
class IterationStall : public Error {
public:
    using Error::Error;
};

class NewtonDiverged : public Error {
public:
    using Error::Error;
};

class MaxIterations : public Error {
public:
    using Error::Error;
};

// composite heterogeneity failed its envelope check on the grid
class EnvelopeUnverified : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class BoxViolation : public Error {
public:
    using Error::Error;
};

class NonfiniteValue : public Error {
public:
    using Error::Error;
};

} // namespace shiftwave
