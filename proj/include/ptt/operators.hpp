#pragma once

#include "ptt/field.hpp"

namespace ptt {

// Linear nonlocal operators as spectral multipliers. Differential operators
// with odd symbols (gradient, divergence, Leray, Lambda^{-1}P div) zero the
// unpaired Nyquist planes |k_i| = n/2: the sign of k_i is ambiguous there and
// any choice breaks Hermitian symmetry. Even radial multipliers (laplacian,
// fractional_lambda) act on all modes.

/// Component i carries i*k_i*fhat(k).
SpectralVectorField gradient(const SpectralScalarField& f);

/// sum_i i*k_i*vhat_i(k).
SpectralScalarField divergence(const SpectralVectorField& v);

/// Row-wise divergence of a symmetric tensor: (div s)_i = d_j s_ij.
SpectralVectorField divergence(const SpectralTensorField& s);

SpectralScalarField laplacian(const SpectralScalarField& f);
SpectralVectorField laplacian(const SpectralVectorField& f);

/// |k|^s multiplier; the k=0 coefficient maps to 0 for every s != 0.
SpectralScalarField fractional_lambda(const SpectralScalarField& f, double s);
SpectralVectorField fractional_lambda(const SpectralVectorField& f, double s);

/// Modewise v - k (k.v)/|k|^2; k=0 passes through. Result flagged solenoidal.
SpectralVectorField leray_project(const SpectralVectorField& v);

/// Composite Lambda^{-1} P div acting on a symmetric tensor; zero mode -> 0.
SpectralVectorField lambda_inv_p_div(const SpectralTensorField& s);

/// 2/3-rule mask: zero every mode with an integer frequency |k_i| > n/3.
void dealias(SpectralScalarField& f);
void dealias(SpectralVectorField& f);
void dealias(SpectralTensorField& f);
bool in_dealias_band(const Grid& g, int fx, int fy, int fz);

/// Parseval inner products, volume-weighted to match grid quadrature.
double inner(const SpectralScalarField& a, const SpectralScalarField& b);
double inner(const SpectralVectorField& a, const SpectralVectorField& b);
/// Tensor pairing sum_ij a_ij b_ij (off-diagonal slots weighted twice).
double inner(const SpectralTensorField& a, const SpectralTensorField& b);

double l2_norm(const SpectralScalarField& f);
double l2_norm(const SpectralVectorField& f);
double l2_norm(const SpectralTensorField& f);

/// Max over modes of |k.vhat(k)| / |vhat(k)| scale; 0 for solenoidal fields.
double divergence_defect(const SpectralVectorField& v);

}  // namespace ptt
