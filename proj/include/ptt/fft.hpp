#pragma once

#include <span>
#include <vector>

#include "ptt/field.hpp"
#include "ptt/grid.hpp"

namespace ptt {

// Transform contract: inverse(forward(f)) == f for real grid data.
// forward carries the 1/n^3 normalization so coefficients are Fourier
// coefficients of f(x) = sum_k fhat(k) exp(i k.x).
// Plans are created with FFTW_ESTIMATE: plan choice is then independent of
// runtime timings, which keeps trajectories bit-identical across reruns.

/// Inverse transform; imaginary residue of the Hermitian input is dropped.
std::vector<double> to_physical(const SpectralScalarField& f);

/// Forward transform of real grid data.
SpectralScalarField to_spectral(const Grid& g, std::span<const double> values);

struct PhysicalVector {
  std::array<std::vector<double>, 3> comp;
};
struct PhysicalTensor {
  std::array<std::vector<double>, SpectralTensorField::n_comp> comp;
};

PhysicalVector to_physical(const SpectralVectorField& f);
PhysicalTensor to_physical(const SpectralTensorField& f);

}  // namespace ptt
