#pragma once

#include <stdexcept>
#include <string>

namespace ohmic {

enum class ErrorCode {
    invalid_argument,
    domain,
    unsupported_exponent,
    numerical_accuracy,
    amplitude_underflow,
    undefined_ratio,
    not_found,
    config,
    io,
};

/// Base of every exception thrown by the library. The code survives the
/// trip through the C API as an integer status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorCode::domain, what) {}
};

class UnsupportedExponent : public Error {
public:
    explicit UnsupportedExponent(double s)
        : Error(ErrorCode::unsupported_exponent,
                "closed-form decay rate exists only for s in {0.5, 1, 3} (got s=" + std::to_string(s) +
                    "); use decay_rate_quadrature or RateModel::exact"),
          s_(s) {}

    double exponent() const noexcept { return s_; }

private:
    double s_;
};

/// Adaptive integrator could not reach the requested tolerance.
class NumericalAccuracyError : public Error {
public:
    NumericalAccuracyError(const std::string& what, double achieved)
        : Error(ErrorCode::numerical_accuracy, what + " (achieved error estimate " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}

    double achieved_error() const noexcept { return achieved_; }

private:
    double achieved_;
};

class AmplitudeUnderflow : public Error {
public:
    AmplitudeUnderflow(std::size_t index, double t)
        : Error(ErrorCode::amplitude_underflow,
                "|p(t)| below floor at sample " + std::to_string(index) + " (t=" + std::to_string(t) + ")"),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class UndefinedRatio : public Error {
public:
    explicit UndefinedRatio(const std::string& what) : Error(ErrorCode::undefined_ratio, what) {}
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(ErrorCode::config, field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

}  // namespace ohmic
