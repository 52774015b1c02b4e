#pragma once

#include <stdexcept>
#include <string>

namespace cntrap {

// Quadrature, series or solver failure. Carries a partial result when one exists.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what, double partial = 0.0)
        : std::runtime_error(what), partial_(partial) {}
    double partial() const { return partial_; }

private:
    double partial_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cntrap
