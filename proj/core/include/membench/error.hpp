#pragma once

#include <stdexcept>
#include <string>

namespace membench {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument / configuration value.
struct ParameterError : Error {
    using Error::Error;
};

// Timing harness failure (zero samples, coarse clock, ...).
struct MeasurementError : Error {
    using Error::Error;
};

// No array size satisfies the working-set bounds for a memory level.
struct SizingError : Error {
    using Error::Error;
};

// A kernel produced output that fails its defining formula.
struct KernelError : Error {
    using Error::Error;
};

// Allocation or other system resource failure.
struct ResourceError : Error {
    using Error::Error;
};

// Malformed input file (device profile, PPM, records).
struct FormatError : Error {
    using Error::Error;
};

}  // namespace membench
