#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fjet {

/// Bad user input: unknown parameters, malformed feature strings, grids that
/// do not line up with the base step. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite value.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Valid input outside what an operation supports (e.g. overdamped exact_ho).
class UnsupportedCase : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RankDeficientError : public std::runtime_error {
public:
    RankDeficientError(const std::string& what, std::vector<std::string> dependent)
        : std::runtime_error(what), dependent_(std::move(dependent)) {}

    /// Canonical names of the features found linearly dependent on the rest.
    const std::vector<std::string>& dependent() const { return dependent_; }

private:
    std::vector<std::string> dependent_;
};

}  // namespace fjet
