#pragma once

#include <stdexcept>
#include <string>

namespace trirec {

/// Bad data: out-of-range ids or ratings, malformed rows, empty inputs.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A malformed line in an input file. what() carries "path:line: reason".
class ParseError : public InputError {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& reason)
        : InputError(path + ":" + std::to_string(line) + ": " + reason), path_(path), line_(line)
    {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

/// Statistic is undefined for the given sample (e.g. zero-variance differences).
class DegenerateInputError : public InputError {
public:
    using InputError::InputError;
};

/// Invalid hyperparameters or run configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A non-finite value appeared in the model or the loss.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace trirec
