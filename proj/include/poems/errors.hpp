#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace poems {

// Maps one-to-one onto the CLI exit status.
enum class ErrorClass { usage = 2, config = 3, numeric = 4, io = 5 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const noexcept { return cls_; }
    int exit_code() const noexcept { return static_cast<int>(cls_); }

private:
    ErrorClass cls_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorClass::usage, what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(ErrorClass::config, "line " + std::to_string(line) + ", column " +
                                        std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorClass::config, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorClass::io, what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorClass::numeric, what) {}
};

#define POEMS_NUMERIC_ERROR(Name)                                         \
    class Name : public NumericError {                                    \
    public:                                                               \
        explicit Name(const std::string& what) : NumericError(what) {}    \
    }

POEMS_NUMERIC_ERROR(NonPhysicalCoupling);
POEMS_NUMERIC_ERROR(TangentPole);
POEMS_NUMERIC_ERROR(ResonanceSingularity);
POEMS_NUMERIC_ERROR(DegenerateCavity);
POEMS_NUMERIC_ERROR(DomainMismatch);
POEMS_NUMERIC_ERROR(ZeroTransfer);
POEMS_NUMERIC_ERROR(ZeroNoise);
POEMS_NUMERIC_ERROR(CalibrationInfeasible);

#undef POEMS_NUMERIC_ERROR

}  // namespace poems
