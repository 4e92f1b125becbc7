#pragma once

#include <stdexcept>
#include <string>

namespace ghz {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid geometry or lattice specification.
struct SpecError : Error {
  using Error::Error;
};

// System size exceeds a configured capacity (dense diagonalization, 2^N storage).
struct CapacityError : Error {
  using Error::Error;
};

// Waveform sampled outside [0, T].
struct DomainError : Error {
  using Error::Error;
};

// Krylov propagation failed to converge within the configured limits.
struct PropagationError : Error {
  using Error::Error;
};

// Empty or full subsystem requested for a bipartite entropy.
struct PartitionError : Error {
  using Error::Error;
};

// Kernel matrix could not be factorized even after maximum jitter.
struct FitError : Error {
  using Error::Error;
};

// Malformed or physically invalid run configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Filesystem operation failed (open, write, rename).
struct IoError : Error {
  using Error::Error;
};

}  // namespace ghz
