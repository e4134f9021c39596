#pragma once

#include <vector>

#include "ptt/integrator.hpp"
#include "ptt/littlewood_paley.hpp"
#include "ptt/model.hpp"

namespace ptt {

/// Solenoidal companions of the state:
///   stress_flux      = Lambda^-1 P div sigma
///   flux_defect      = 2 Lambda stress_flux - u
///   relaxed_velocity = u - Lambda^-1 stress_flux
struct AuxiliaryFields {
  SpectralVectorField stress_flux;
  SpectralVectorField flux_defect;
  SpectralVectorField relaxed_velocity;
};

AuxiliaryFields auxiliary_fields(const SimState& state);

/// Initial-data norm: low parts of (u0, sigma0) in B^{1/2}_{2,1}, the high
/// part of u0 in B^{3/p-1}_{p,1} and of sigma0 in B^{3/p}_{p,1}.
/// Rejects p outside [2, 4].
double energy_e0(const DyadicBank& bank, const SpectralVectorField& u0,
                 const SpectralTensorField& sigma0, int p);

/// Running values of the tracked energy groups.
struct EnergyBreakdown {
  // sup-in-time (Chemin-Lerner) pieces
  double tilde_u_low = 0.0;      // u low,  B^{1/2}_{2,1}
  double tilde_sigma_low = 0.0;  // sigma low, B^{1/2}_{2,1}
  double tilde_u_high = 0.0;     // u high, B^{3/p-1}_{p,1}
  double tilde_sigma_high = 0.0; // sigma high, B^{3/p}_{p,1}
  // time-integrated pieces (trapezoid at sample cadence)
  double int_u_low = 0.0;        // u low,  B^{5/2}_{2,1}
  double int_psi_low = 0.0;      // stress_flux low, B^{5/2}_{2,1}
  double int_u_high = 0.0;       // u high, B^{3/p+1}_{p,1}
  double int_psi_high = 0.0;     // stress_flux high, B^{3/p}_{p,1}
  double int_trace_low = 0.0;    // tr sigma low,  B^{3/2}_{2,1}
  double int_trace_high = 0.0;   // tr sigma high, B^{3/p}_{p,1}

  double low_sup() const { return tilde_u_low + tilde_sigma_low; }
  double low_dissipation() const { return int_u_low + int_psi_low; }
  double high_mixed() const {
    return tilde_u_high + tilde_sigma_high + int_u_high + int_psi_high;
  }
  double trace_integrals() const { return int_trace_low + int_trace_high; }
  double total() const {
    return low_sup() + low_dissipation() + high_mixed() + trace_integrals();
  }
};

struct SampleRow {
  double t = 0.0;
  EnergyBreakdown running;
  // snapshot integrands, kept so integrals can be replayed
  double u_low_b52 = 0.0;
  double psi_low_b52 = 0.0;
  double u_high_b3p1 = 0.0;
  double psi_high_b3p = 0.0;
  double trace_low_b32 = 0.0;
  double trace_high_b3p = 0.0;
  double sigma_linf = 0.0;
  double trace_max = 0.0;
};

/// Accumulates the energy groups along a trajectory. Single writer;
/// update() must see nondecreasing times. e0 is fixed at construction.
class EnergyLedger {
 public:
  EnergyLedger(const DyadicBank& bank, int p, const SpectralVectorField& u0,
               const SpectralTensorField& sigma0);

  void update(const SimState& state, const ModelParams& params);

  double e0() const { return e0_; }
  int p() const { return p_; }
  const EnergyBreakdown& running() const { return running_; }
  const std::vector<SampleRow>& history() const { return history_; }
  double last_time() const { return last_t_; }

 private:
  const DyadicBank* bank_;
  int p_;
  double e0_;
  double last_t_ = -1.0;
  EnergyBreakdown running_;
  TildeNormTracker u_low_, sigma_low_, u_high_, sigma_high_;
  SampleRow prev_;
  bool have_prev_ = false;
  std::vector<SampleRow> history_;
};

struct LinfBoundReport {
  double linf = 0.0;       // ||sigma||_Linf (pointwise Frobenius max)
  double low_norm = 0.0;   // sigma low in B^{1/2}_{2,1}
  double high_norm = 0.0;  // sigma high in B^{3/p}_{p,1}
  double ratio = 0.0;      // linf / (low + high); 0 for sigma = 0
};

/// Measures the embedding ratio behind the sup-norm control of the stress.
LinfBoundReport linf_bound_check(const DyadicBank& bank,
                                 const SpectralTensorField& sigma, int p);

}  // namespace ptt
