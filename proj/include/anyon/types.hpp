#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace anyon {

using Complex = std::complex<double>;

/// Particle type, as an index into AnyonModel::labels().
using Charge = int;

/// Default absolute tolerance for entrywise comparisons.
inline constexpr double kDefaultTolerance = 1e-10;

/// Entries with magnitude below this are removed from sparse operators.
inline constexpr double kDropTolerance = 1e-14;

/// Malformed or unsupported model data.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller passed arguments outside an operation's domain.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace anyon
