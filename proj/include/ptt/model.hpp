#pragma once

#include "ptt/field.hpp"
#include "ptt/operators.hpp"

namespace ptt {

/// Constitutive and coupling parameters. The studied regime is
/// mu = mu1 = mu2 = b = 1, a = lambda = 0 with a positive initial trace
/// level c0; the general parameters are carried but only that regime is
/// covered by the acceptance suite.
struct ModelParams {
  double mu = 1.0;      // viscosity
  double mu1 = 1.0;     // elastic coupling (stress -> velocity)
  double mu2 = 1.0;     // strain coupling (velocity -> stress)
  double a = 0.0;       // linear relaxation rate
  double b = 1.0;       // quadratic (trace) relaxation rate
  double lambda = 0.0;  // slip parameter of the bilinear coupling
  double c0 = 1.0;      // initial trace level of the base state

  void validate() const;
  bool paper_regime() const {
    return mu == 1.0 && mu1 == 1.0 && mu2 == 1.0 && b == 1.0 && a == 0.0 &&
           lambda == 0.0;
  }
  /// Base-state trace 1/(1/c0 + t); also the deviatoric damping rate.
  double base_trace(double t) const { return 1.0 / (1.0 / c0 + t); }
};

/// Solenoidal velocity + symmetric stress perturbation at time t.
struct SimState {
  SpectralVectorField u;
  SpectralTensorField sigma;
  double t = 0.0;

  SimState() = default;
  SimState(const Grid& g) : u(g), sigma(g) {}
  const Grid& grid() const { return u.grid(); }
};

/// Antisymmetric 3x3 tensor, storage xy xz yz; (i,j) entries carry sign.
struct SkewTensorField {
  std::array<SpectralScalarField, 3> comp;
  SkewTensorField() = default;
  explicit SkewTensorField(const Grid& g)
      : comp{SpectralScalarField(g), SpectralScalarField(g),
             SpectralScalarField(g)} {}
  const Grid& grid() const { return comp[0].grid(); }
};

/// D(u) = (grad u + grad u^T)/2; trace equals div u.
SpectralTensorField sym_grad(const SpectralVectorField& u);

/// Omega(u) = (grad u - grad u^T)/2.
SkewTensorField skew_grad(const SpectralVectorField& u);

/// Q(tau, grad u) = tau Omega - Omega tau + lambda (D tau + tau D),
/// evaluated pointwise in physical space and dealiased.
SpectralTensorField q_bilinear(const SpectralTensorField& tau,
                               const SpectralVectorField& u, double lambda);

/// Spatially uniform exact base state: (1/3) (1/(1/c0+t)) I.
SpectralTensorField special_solution(const Grid& g, double t, double c0);
/// Time derivative of the base state: -(1/3) (1/(1/c0+t))^2 I.
SpectralTensorField special_solution_rate(const Grid& g, double t, double c0);

struct Rhs {
  SpectralVectorField du;
  SpectralTensorField dsigma;
};

/// Full right-hand side of the perturbation system:
///   du     = Laplace u + P(div sigma - u.grad u)
///   dsigma = -u.grad sigma - (1/(1/c0+t))(sigma + tr(sigma)/3 I)
///            - tr(sigma) sigma - Q(sigma, grad u) + D(u)
/// Nonlinear terms are formed pointwise in physical space and dealiased
/// (2/3 rule) unless do_dealias is cleared.
Rhs rhs_perturbation(const SimState& state, const ModelParams& params,
                     bool do_dealias = true);

/// Same system without the stiff linear parts (viscosity, damping); this is
/// the piece the time integrator treats explicitly.
Rhs rhs_explicit(const SimState& state, const ModelParams& params,
                 bool do_dealias = true);

/// General-parameter right-hand side of the original system in (u, tau).
Rhs rhs_original(const SpectralVectorField& u, const SpectralTensorField& tau,
                 double t, const ModelParams& params);

SpectralScalarField trace_field(const SpectralTensorField& sigma);

/// L2 norm of tr(dsigma) minus the closed trace dynamics
/// -u.grad(tr sigma) - (tr sigma)^2 - (2/(1/c0+t)) tr sigma, each side
/// assembled independently. Vanishes in the studied regime.
double trace_rhs_residual(const SimState& state, const ModelParams& params);

}  // namespace ptt
