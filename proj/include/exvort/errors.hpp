#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace exvort {

struct InvalidInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnsupportedInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SurfaceSingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoVacuumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when the Newton iteration fails to reach the requested tolerance.
// Carries the residual history so callers can report it.
struct DivergenceError : std::runtime_error {
    std::vector<double> residual_history;

    DivergenceError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), residual_history(std::move(history)) {}
};

}  // namespace exvort
