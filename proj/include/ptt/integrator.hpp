#pragma once

#include <optional>
#include <string>

#include "ptt/model.hpp"

namespace ptt {

enum class Scheme { if_rk2, if_rk4 };

struct StepperConfig {
  double dt = 0.0;          // fixed step when > 0, else suggest_dt drives
  Scheme scheme = Scheme::if_rk2;
  bool dealias = true;
  double cfl_safety = 0.4;  // in (0, 1]
  double dt_max = 0.01;

  void validate() const;
};

/// Exact one-step decay factors of the linear stress damping
///   s_t = -(1/(1/c0+t)) (s + tr(s)/3 I):
/// the deviatoric part contracts by (1/c0+t0)/(1/c0+t1), the trace part by
/// the square of that ratio.
struct DampingFactors {
  double deviatoric;
  double trace;
};
DampingFactors damping_factors(double t0, double t1, double c0);

struct BlowupReport {
  double t = 0.0;
  std::string reason;
  double max_trace = 0.0;
};

struct StepResult {
  SimState state;  // advanced state, or the last finite state on blow-up
  std::optional<BlowupReport> blowup;
};

/// Advance one step of the perturbation system. Viscosity and the stress
/// damping are integrated exactly (integrating factors); advection, the
/// quadratic terms, Q, and the div sigma / D(u) coupling are explicit
/// within the Runge-Kutta stages. The velocity is re-projected after the
/// step. Non-finite output or max|tr sigma|*dt > 1 yields a blow-up report
/// instead of an exception.
StepResult step(const SimState& state, const StepperConfig& stepper,
                const ModelParams& params);

struct FieldMaxima {
  double max_u = 0.0;        // pointwise Euclidean magnitude
  double max_trace = 0.0;    // pointwise |tr sigma|
};
FieldMaxima compute_maxima(const SimState& state);

/// cfl_safety * min(grid spacing / max|u|, 1 / max|tr sigma|, dt_max).
double suggest_dt(const SimState& state, const StepperConfig& stepper);
double suggest_dt(const FieldMaxima& maxima, const Grid& g,
                  const StepperConfig& stepper);

}  // namespace ptt
