#include "ptt/integrator.hpp"

#include <cmath>
#include <stdexcept>

#include "ptt/fft.hpp"

namespace ptt {

void StepperConfig::validate() const {
  if (dt < 0.0 || !std::isfinite(dt))
    throw std::invalid_argument("StepperConfig: dt must be finite and >= 0");
  if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
    throw std::invalid_argument("StepperConfig: cfl_safety must be in (0, 1]");
  if (!(dt_max > 0.0))
    throw std::invalid_argument("StepperConfig: dt_max must be positive");
}

DampingFactors damping_factors(double t0, double t1, double c0) {
  if (t0 < 0.0 || t1 < t0)
    throw std::invalid_argument("damping_factors: need 0 <= t0 <= t1");
  if (!(c0 > 0.0)) throw std::invalid_argument("damping_factors: c0 > 0");
  const double ratio = (1.0 / c0 + t0) / (1.0 / c0 + t1);
  return {ratio, ratio * ratio};
}

namespace {

struct Pair {
  SpectralVectorField v;
  SpectralTensorField s;
};

Pair make_pair_like(const SimState& st) {
  return {st.u, st.sigma};
}

Pair from_rhs(Rhs&& r) { return {std::move(r.du), std::move(r.dsigma)}; }

void axpy(Pair& y, double a, const Pair& x) {
  for (int i = 0; i < 3; ++i) {
    auto o = y.v[i].coeffs();
    const auto c = x.v[i].coeffs();
    for (std::size_t m = 0; m < o.size(); ++m) o[m] += a * c[m];
  }
  for (int i = 0; i < SpectralTensorField::n_comp; ++i) {
    auto o = y.s.comp[i].coeffs();
    const auto c = x.s.comp[i].coeffs();
    for (std::size_t m = 0; m < o.size(); ++m) o[m] += a * c[m];
  }
}

// Exact propagator of the stiff linear parts from t0 to t1: heat factor
// exp(-mu |k|^2 dt) on the velocity slot, damping ratios on the stress.
void propagate(Pair& y, double t0, double t1, const ModelParams& params) {
  const Grid& g = y.v.grid();
  const double dt = t1 - t0;
  std::vector<double> heat(g.size());
  for_each_mode(g, [&](std::size_t m, double kx, double ky, double kz) {
    heat[m] = std::exp(-params.mu * (kx * kx + ky * ky + kz * kz) * dt);
  });
  for (int i = 0; i < 3; ++i) {
    auto o = y.v[i].coeffs();
    for (std::size_t m = 0; m < o.size(); ++m) o[m] *= heat[m];
  }
  const auto f = damping_factors(t0, t1, params.c0);
  const auto tr = y.s.trace();
  const double iso_shift = (f.trace - f.deviatoric) / 3.0;
  for (int c = 0; c < SpectralTensorField::n_comp; ++c) {
    auto o = y.s.comp[c].coeffs();
    for (std::size_t m = 0; m < o.size(); ++m) o[m] *= f.deviatoric;
    if (SpectralTensorField::is_diagonal(c)) {
      const auto trc = tr.coeffs();
      for (std::size_t m = 0; m < o.size(); ++m)
        o[m] += iso_shift * trc[m];
    }
  }
}

Pair propagated(const Pair& y, double t0, double t1,
                const ModelParams& params) {
  Pair out = y;
  propagate(out, t0, t1, params);
  return out;
}

Pair eval_n(const Pair& y, double t, const StepperConfig& cfg,
            const ModelParams& params) {
  SimState st;
  st.u = y.v;
  st.sigma = y.s;
  st.t = t;
  return from_rhs(rhs_explicit(st, params, cfg.dealias));
}

double max_abs_physical(const SpectralScalarField& f) {
  const auto v = to_physical(f);
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

FieldMaxima compute_maxima(const SimState& state) {
  FieldMaxima out;
  const auto up = to_physical(state.u);
  for (std::size_t i = 0; i < up.comp[0].size(); ++i) {
    const double m = up.comp[0][i] * up.comp[0][i] +
                     up.comp[1][i] * up.comp[1][i] +
                     up.comp[2][i] * up.comp[2][i];
    out.max_u = std::max(out.max_u, m);
  }
  out.max_u = std::sqrt(out.max_u);
  out.max_trace = max_abs_physical(state.sigma.trace());
  return out;
}

double suggest_dt(const FieldMaxima& maxima, const Grid& g,
                  const StepperConfig& stepper) {
  double dt = stepper.dt_max;
  if (maxima.max_u > 0.0) dt = std::min(dt, g.spacing() / maxima.max_u);
  if (maxima.max_trace > 0.0) dt = std::min(dt, 1.0 / maxima.max_trace);
  return stepper.cfl_safety * dt;
}

double suggest_dt(const SimState& state, const StepperConfig& stepper) {
  return suggest_dt(compute_maxima(state), state.grid(), stepper);
}

StepResult step(const SimState& state, const StepperConfig& stepper,
                const ModelParams& params) {
  stepper.validate();
  params.validate();
  const double dt = stepper.dt > 0.0 ? stepper.dt : suggest_dt(state, stepper);
  const double t0 = state.t;
  const double t1 = t0 + dt;

  {
    const double tr0 = max_abs_physical(state.sigma.trace());
    if (tr0 * dt > 1.0)
      return {state,
              BlowupReport{t0, "trace growth outruns the step size", tr0}};
  }

  const Pair y0 = make_pair_like(state);
  Pair y1;
  if (stepper.scheme == Scheme::if_rk2) {
    const Pair k1 = eval_n(y0, t0, stepper, params);
    Pair pred = y0;
    axpy(pred, dt, k1);
    propagate(pred, t0, t1, params);
    const Pair k2 = eval_n(pred, t1, stepper, params);
    y1 = propagated(y0, t0, t1, params);
    Pair k1p = propagated(k1, t0, t1, params);
    axpy(y1, 0.5 * dt, k1p);
    axpy(y1, 0.5 * dt, k2);
  } else {
    const double tm = t0 + 0.5 * dt;
    const Pair k1 = eval_n(y0, t0, stepper, params);
    Pair ya = y0;
    axpy(ya, 0.5 * dt, k1);
    propagate(ya, t0, tm, params);
    const Pair k2 = eval_n(ya, tm, stepper, params);
    Pair yb = propagated(y0, t0, tm, params);
    axpy(yb, 0.5 * dt, k2);
    const Pair k3 = eval_n(yb, tm, stepper, params);
    Pair yc = propagated(y0, t0, t1, params);
    {
      Pair k3p = propagated(k3, tm, t1, params);
      axpy(yc, dt, k3p);
    }
    const Pair k4 = eval_n(yc, t1, stepper, params);
    y1 = propagated(y0, t0, t1, params);
    {
      Pair k1p = propagated(k1, t0, t1, params);
      axpy(y1, dt / 6.0, k1p);
    }
    {
      Pair k2p = propagated(k2, tm, t1, params);
      axpy(y1, dt / 3.0, k2p);
      Pair k3p = propagated(k3, tm, t1, params);
      axpy(y1, dt / 3.0, k3p);
    }
    axpy(y1, dt / 6.0, k4);
  }

  SimState next;
  next.u = leray_project(y1.v);
  next.sigma = std::move(y1.s);
  next.t = t1;

  if (!all_finite(next.u) || !all_finite(next.sigma)) {
    return {state, BlowupReport{t1, "non-finite field values", 0.0}};
  }
  const double tr1 = max_abs_physical(next.sigma.trace());
  if (tr1 * dt > 1.0) {
    return {std::move(next),
            BlowupReport{t1, "trace growth outruns the step size", tr1}};
  }
  return {std::move(next), std::nullopt};
}

}  // namespace ptt
