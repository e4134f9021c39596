#pragma once

#include <cstdint>
#include <random>

#include "ptt/field.hpp"

namespace ptt {

/// Deterministic standard normals: mt19937_64 bits mapped to (0,1) by an
/// explicit ldexp, then Box-Muller. Unlike std::normal_distribution the
/// stream is identical on every platform, so pinned probe baselines hold.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}
  double operator()();
  double uniform();  // in (0,1)

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Random real scalar field: independent complex Gaussian coefficients with
/// a |k|^-2 envelope, Hermitian-symmetrized, supported on 0 < |k| <= k_max
/// (mean-free). Modes outside the dealias band are dropped as well.
SpectralScalarField random_scalar_field(const Grid& g, GaussianSampler& gauss,
                                        double k_max);

SpectralVectorField random_vector_field(const Grid& g, GaussianSampler& gauss,
                                        double k_max);

/// Leray-projected random vector field.
SpectralVectorField random_solenoidal_field(const Grid& g,
                                            GaussianSampler& gauss,
                                            double k_max);

SpectralTensorField random_tensor_field(const Grid& g, GaussianSampler& gauss,
                                        double k_max);

}  // namespace ptt
