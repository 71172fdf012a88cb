#pragma once

#include <stdexcept>
#include <string>

namespace nlsb {

// Error hierarchy. setup_error covers configuration, dimension, and domain
// problems detected before or while assembling a run (CLI exit code 2);
// numeric_error covers runtime failures of the schemes themselves (exit 3).

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct setup_error : error {
  using error::error;
};

struct config_error : setup_error {
  using setup_error::setup_error;
};

struct dimension_error : setup_error {
  using setup_error::setup_error;
};

struct domain_error : setup_error {
  using setup_error::setup_error;
};

// Grid too coarse for the requested feature (e.g. mollifier width < 3h).
struct resolution_error : setup_error {
  using setup_error::setup_error;
};

// Parameter outside the family the closed forms cover (e.g. b >= 1).
struct unsupported_parameter_error : setup_error {
  using setup_error::setup_error;
};

// Query time requires data from outside the computational domain.
struct horizon_error : setup_error {
  using setup_error::setup_error;
};

struct io_error : setup_error {
  using setup_error::setup_error;
};

struct numeric_error : error {
  using error::error;
};

// A field left the representable range (overflow/NaN). Carries where.
struct divergence_error : numeric_error {
  divergence_error(const std::string& what, double where, long step_index = -1)
      : numeric_error(what), location(where), step(step_index) {}
  double location = 0.0;  // x for ODE integration, t for time stepping
  long step = -1;
};

// Newton iteration for the implicit step failed to meet its tolerance.
struct newton_error : numeric_error {
  newton_error(const std::string& what, double residual, int iters)
      : numeric_error(what), last_residual(residual), iterations(iters) {}
  double last_residual = 0.0;
  int iterations = 0;
};

// Requested explicit step violates the stability bound. Carries the wave
// speed that produced the bound and the largest admissible step.
struct cfl_error : numeric_error {
  cfl_error(const std::string& what, double speed, double requested, double admissible)
      : numeric_error(what), max_speed(speed), dt_requested(requested), dt_admissible(admissible) {}
  double max_speed = 0.0;
  double dt_requested = 0.0;
  double dt_admissible = 0.0;
};

}  // namespace nlsb
