#pragma once

#include <stdexcept>
#include <string>

namespace dsm {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Frame construction or cross-frame subset operations.
struct FrameError : Error {
    using Error::Error;
};

// Mass-function validation (normalization, empty-set mass, bad factors).
struct MassError : Error {
    using Error::Error;
};

// Combination-rule preconditions (source count, frame mismatch, guards).
struct FusionError : Error {
    using Error::Error;
};

// Scenario parsing/validation; carries file context in the message.
struct ScenarioError : Error {
    using Error::Error;
};

} // namespace dsm
