#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omdiss {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class InvalidConfiguration : public Error {
public:
    using Error::Error;
};

class UnstableSystem : public Error {
public:
    using Error::Error;
};

class StepSizeUnderflow : public Error {
public:
    using Error::Error;
};

class NonPhysicalCovariance : public Error {
public:
    using Error::Error;
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

class AllCellsUnstable : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// Scenario-file syntax or typing problem; carries the offending line and field.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::string field, const std::string& what)
        : Error("line " + std::to_string(line) + (field.empty() ? "" : " [" + field + "]") + ": " + what),
          line_(line),
          field_(std::move(field)) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

}  // namespace omdiss
