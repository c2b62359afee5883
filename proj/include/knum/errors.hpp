#pragma once

#include <stdexcept>
#include <string>

namespace knum {

/// Malformed or inconsistent input (shape mismatches, schema violations, ...).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A computation left the declared degree window or materialization depth.
struct WindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A Maurer-Cartan or closedness requirement failed.
struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace knum
