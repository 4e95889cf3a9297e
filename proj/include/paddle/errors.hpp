#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace paddle {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model or operation parameter violates its domain.
class InvalidParameter : public Error {
public:
    InvalidParameter(std::string name, const std::string& reason)
        : Error("invalid parameter '" + name + "': " + reason), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Some point of the paddle would reach or cross an electrode.
class TouchViolation : public Error {
public:
    using Error::Error;
};

/// A value lies outside the range the model can produce.
class OutOfRange : public Error {
public:
    explicit OutOfRange(const std::string& what, std::optional<std::size_t> row = std::nullopt)
        : Error(row ? what + " (row " + std::to_string(*row) + ")" : what), row_(row) {}

    std::optional<std::size_t> row() const noexcept { return row_; }

private:
    std::optional<std::size_t> row_;
};

class NoStableEquilibrium : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

/// Data that cannot identify the requested parameters.
class DegenerateData : public Error {
public:
    using Error::Error;
};

}  // namespace paddle
