#pragma once

#include <stdexcept>
#include <string>

namespace boxdim {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// The Lévy measure violates an integrability requirement.
class ModelInvalidError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A query asks for resolution below the skeleton cutoff.
class PrecisionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad or incomplete configuration (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A simulation could not complete (e.g. passage never reached).
class SimulationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace boxdim
