#pragma once

#include <stdexcept>
#include <string>

namespace swkb {

// Invalid parameters, energies outside the bound range, refused operations.
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Energy has no pair of real turning points inside the domain.
class UnboundEnergyError : public DomainError {
public:
  using DomainError::DomainError;
};

// A numerical procedure failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// sqrt continuation could not decide between the two roots.
class BranchAmbiguityError : public ConvergenceError {
public:
  using ConvergenceError::ConvergenceError;
};

}  // namespace swkb
