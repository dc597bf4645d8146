#pragma once

#include <stdexcept>
#include <string>

namespace dvac {

/// Invalid physical or numerical configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A first-hop transition energy sits too close to the drive bandlimit |dE| = m.
class BandEdgeError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// An evolution violated its unitarity bound (CLI exit code 3).
class ToleranceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The q-scaling fit was handed shifts of inconsistent sign.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dvac
