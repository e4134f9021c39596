#include "ptt/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "ptt/operators.hpp"

namespace ptt {

AuxiliaryFields auxiliary_fields(const SimState& state) {
  AuxiliaryFields out;
  out.stress_flux = lambda_inv_p_div(state.sigma);
  out.flux_defect = fractional_lambda(out.stress_flux, 1.0);
  out.relaxed_velocity = fractional_lambda(out.stress_flux, -1.0);
  for (int i = 0; i < 3; ++i) {
    auto fd = out.flux_defect[i].coeffs();
    auto rv = out.relaxed_velocity[i].coeffs();
    const auto uc = state.u[i].coeffs();
    for (std::size_t m = 0; m < fd.size(); ++m) {
      fd[m] = 2.0 * fd[m] - uc[m];
      rv[m] = uc[m] - rv[m];
    }
  }
  out.flux_defect.solenoidal = state.u.solenoidal;
  out.relaxed_velocity.solenoidal = state.u.solenoidal;
  return out;
}

double energy_e0(const DyadicBank& bank, const SpectralVectorField& u0,
                 const SpectralTensorField& sigma0, int p) {
  if (p < 2 || p > 4)
    throw std::invalid_argument("energy_e0: p must lie in [2, 4]");
  const double sp = 3.0 / p;
  double e = 0.0;
  e += besov_norm(bank, u0, {0.5, 2, 1}, ShellRange::low);
  e += besov_norm(bank, sigma0, {0.5, 2, 1}, ShellRange::low);
  e += besov_norm(bank, u0, {sp - 1.0, p, 1}, ShellRange::high);
  e += besov_norm(bank, sigma0, {sp, p, 1}, ShellRange::high);
  return e;
}

EnergyLedger::EnergyLedger(const DyadicBank& bank, int p,
                           const SpectralVectorField& u0,
                           const SpectralTensorField& sigma0)
    : bank_(&bank),
      p_(p),
      e0_(energy_e0(bank, u0, sigma0, p)),
      u_low_(bank, 2),
      sigma_low_(bank, 2),
      u_high_(bank, p),
      sigma_high_(bank, p) {}

void EnergyLedger::update(const SimState& state, const ModelParams& params) {
  (void)params;
  if (state.t < last_t_)
    throw std::invalid_argument("EnergyLedger: time must not decrease");
  const DyadicBank& bank = *bank_;
  const double sp = 3.0 / p_;

  u_low_.update(bank, state.u, state.t);
  sigma_low_.update(bank, state.sigma, state.t);
  u_high_.update(bank, state.u, state.t);
  sigma_high_.update(bank, state.sigma, state.t);

  SampleRow row;
  row.t = state.t;
  const auto aux_flux = lambda_inv_p_div(state.sigma);
  row.u_low_b52 = besov_norm(bank, state.u, {2.5, 2, 1}, ShellRange::low);
  row.psi_low_b52 = besov_norm(bank, aux_flux, {2.5, 2, 1}, ShellRange::low);
  row.u_high_b3p1 =
      besov_norm(bank, state.u, {sp + 1.0, p_, 1}, ShellRange::high);
  row.psi_high_b3p =
      besov_norm(bank, aux_flux, {sp, p_, 1}, ShellRange::high);
  const auto tr = trace_field(state.sigma);
  row.trace_low_b32 = besov_norm(bank, tr, {1.5, 2, 1}, ShellRange::low);
  row.trace_high_b3p = besov_norm(bank, tr, {sp, p_, 1}, ShellRange::high);
  row.sigma_linf = lp_norm(state.sigma, kInf);
  row.trace_max = lp_norm(tr, kInf);

  if (have_prev_) {
    const double h = 0.5 * (state.t - prev_.t);
    running_.int_u_low += h * (prev_.u_low_b52 + row.u_low_b52);
    running_.int_psi_low += h * (prev_.psi_low_b52 + row.psi_low_b52);
    running_.int_u_high += h * (prev_.u_high_b3p1 + row.u_high_b3p1);
    running_.int_psi_high += h * (prev_.psi_high_b3p + row.psi_high_b3p);
    running_.int_trace_low += h * (prev_.trace_low_b32 + row.trace_low_b32);
    running_.int_trace_high += h * (prev_.trace_high_b3p + row.trace_high_b3p);
  }
  running_.tilde_u_low = u_low_.norm(bank, {0.5, 2, 1}, ShellRange::low);
  running_.tilde_sigma_low =
      sigma_low_.norm(bank, {0.5, 2, 1}, ShellRange::low);
  running_.tilde_u_high =
      u_high_.norm(bank, {sp - 1.0, p_, 1}, ShellRange::high);
  running_.tilde_sigma_high =
      sigma_high_.norm(bank, {sp, p_, 1}, ShellRange::high);

  row.running = running_;
  history_.push_back(row);
  prev_ = row;
  have_prev_ = true;
  last_t_ = state.t;
}

LinfBoundReport linf_bound_check(const DyadicBank& bank,
                                 const SpectralTensorField& sigma, int p) {
  LinfBoundReport rep;
  rep.linf = lp_norm(sigma, kInf);
  rep.low_norm = besov_norm(bank, sigma, {0.5, 2, 1}, ShellRange::low);
  rep.high_norm =
      besov_norm(bank, sigma, {3.0 / p, p, 1}, ShellRange::high);
  const double denom = rep.low_norm + rep.high_norm;
  if (denom == 0.0) {
    if (rep.linf > 1e-14)
      throw std::logic_error(
          "linf_bound_check: nonzero field with zero Besov norms");
    rep.ratio = 0.0;
  } else {
    rep.ratio = rep.linf / denom;
  }
  return rep;
}

}  // namespace ptt
