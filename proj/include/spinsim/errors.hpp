#ifndef SPINSIM_ERRORS_HPP
#define SPINSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spinsim {

// Error taxonomy, mapped to CLI exit codes in cli.cpp:
//   ConfigError / ValidationError / DomainError / ResolutionError -> 3
//   SolverError / NumericError                                    -> 4

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Physical-domain problems (e.g. grid does not contain the TF surface).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grid spacing too coarse for the requested operator.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace spinsim

#endif
