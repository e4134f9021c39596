#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ptt/littlewood_paley.hpp"

namespace ptt {

/// Relative L2 residual of the paraproduct/remainder splitting
///   uv = T_u v + R(u, v) + T_v u
/// for mean-free band-limited scalar fields (the mean x mean block has no
/// home in the homogeneous splitting).
double bony_reconstruct(const DyadicBank& bank, const SpectralScalarField& u,
                        const SpectralScalarField& v);

/// The three pieces separately (shell bookkeeping tests).
struct BonyPieces {
  SpectralScalarField paraproduct_uv;  // T_u v
  SpectralScalarField remainder;       // R(u, v)
  SpectralScalarField paraproduct_vu;  // T_v u
};
BonyPieces bony_pieces(const DyadicBank& bank, const SpectralScalarField& u,
                       const SpectralScalarField& v);

struct InequalityStats {
  std::string name;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  int skipped = 0;  // degenerate samples (zero right-hand side)
};

/// Ratio statistics LHS/RHS for one estimate family over seeded random
/// band-limited fields. pass means every ratio was finite and below the
/// ceiling; the recorded numbers act as regression baselines.
struct ProbeReport {
  std::string estimate_id;
  std::uint64_t seed = 0;
  int sample_count = 0;
  int p = 2;
  int grid_n = 0;
  double ceiling = 0.0;
  bool pass = false;
  std::vector<InequalityStats> inequalities;
};

/// Commutator family: weighted shell sums of ||[u.grad, block_j] z|| for a
/// solenoidal u and scalar z, against the low/high norm products.
ProbeReport commutator_probe(const DyadicBank& bank, std::uint64_t seed,
                             int count, int p, double ceiling = 100.0);

/// Product family: low/high Besov norms of pointwise products against
/// products of the factors' norms.
ProbeReport product_probe(const DyadicBank& bank, std::uint64_t seed,
                          int count, int p, double ceiling = 100.0);

}  // namespace ptt
