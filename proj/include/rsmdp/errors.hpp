#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rsmdp {

/// Stable error categories. Their numeric values are mirrored by the C API
/// status codes in rsmdp.h.
enum class ErrorCode : int {
    InvalidArgument = 1,
    InvalidStart = 2,
    DegenerateAlpha = 3,
    Unsupported = 4,
    LpInfeasible = 5,
    LpUnbounded = 6,
    IterationCapExceeded = 7,
    NonConvergence = 8,
    ParseError = 9,
    SchemaViolation = 10,
    IoError = 11,
    CorruptCheckpoint = 12,
    Internal = 99,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::InvalidArgument, what) {}
};

class InvalidStart : public Error {
public:
    explicit InvalidStart(std::size_t state)
        : Error(ErrorCode::InvalidStart, "start state " + std::to_string(state) + " is out of range") {}
};

class DegenerateAlpha : public Error {
public:
    explicit DegenerateAlpha(double alpha)
        : Error(ErrorCode::DegenerateAlpha, "CVaR level must lie in (0,1], got " + std::to_string(alpha)) {}
};

class Unsupported : public Error {
public:
    explicit Unsupported(const std::string& what) : Error(ErrorCode::Unsupported, what) {}
};

class LpInfeasible : public Error {
public:
    explicit LpInfeasible(const std::string& what) : Error(ErrorCode::LpInfeasible, what) {}
};

class LpUnbounded : public Error {
public:
    explicit LpUnbounded(const std::string& what) : Error(ErrorCode::LpUnbounded, what) {}
};

class IterationCapExceeded : public Error {
public:
    IterationCapExceeded(std::size_t cap, double residual)
        : Error(ErrorCode::IterationCapExceeded,
                "value iteration exceeded " + std::to_string(cap) + " iterations (residual " +
                    std::to_string(residual) + ")"),
          cap_(cap), residual_(residual) {}
    std::size_t cap() const noexcept { return cap_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t cap_;
    double residual_;
};

class NonConvergence : public Error {
public:
    NonConvergence(std::size_t iterations, double residual)
        : Error(ErrorCode::NonConvergence,
                "stationary distribution did not converge after " + std::to_string(iterations) +
                    " iterations (L1 residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& reason)
        : Error(ErrorCode::ParseError, "parse error at line " + std::to_string(line) + ": " + reason),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class SchemaViolation : public Error {
public:
    SchemaViolation(const std::string& field, const std::string& reason)
        : Error(ErrorCode::SchemaViolation, "schema violation at '" + field + "': " + reason), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::IoError, what) {}
};

class CorruptCheckpoint : public Error {
public:
    explicit CorruptCheckpoint(const std::string& what) : Error(ErrorCode::CorruptCheckpoint, what) {}
};

} // namespace rsmdp
