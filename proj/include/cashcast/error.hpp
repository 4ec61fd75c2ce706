#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cashcast {

/// Input violates an operation's contract (bad sizes, bad options, unknown enum).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A data file row could not be parsed.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Data is well formed but statistically degenerate (zero variance, zero denominator).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Design matrix is rank deficient; `column()` is the first column that adds no rank.
class CollinearityError : public std::runtime_error {
public:
    CollinearityError(std::string column)
        : std::runtime_error("design matrix is rank deficient at column '" + column + "'"),
          column_(std::move(column)) {}

    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration problem; `path()` is the dotted key path that failed.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace cashcast
