#pragma once

#include <limits>
#include <vector>

#include "ptt/field.hpp"

namespace ptt {

/// Sentinel for the L^infinity / l^infinity index.
inline constexpr int kInf = std::numeric_limits<int>::max();

/// Radial low-pass: 1 on |xi| <= 3/4, 0 on |xi| >= 4/3, smooth monotone
/// in between (integrated C-infinity bump).
double lp_chi(double r);
/// Shell bump lp_chi(r/2) - lp_chi(r); supported on 3/4 <= r <= 8/3 and
/// telescoping to a partition of unity over dyadic scales.
double lp_phi(double r);

struct BesovSpec {
  double s = 0.0;  // regularity
  int p = 2;       // Lebesgue index (kInf for sup norm)
  int r = 1;       // shell summation index (kInf for sup over shells)
};

enum class ShellRange { low, high, all };

/// Sampled dyadic multipliers phi(2^-j |k|) for every shell resolvable on
/// the grid, plus the low/high split at cutoff_N. Immutable after build.
class DyadicBank {
 public:
  DyadicBank(const Grid& g, int cutoff_N);

  const Grid& grid() const { return grid_; }
  int cutoff() const { return cutoff_N_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int shell_count() const { return j_max_ - j_min_ + 1; }

  /// Partition of unity equals 1 exactly for 0 < |k| <= covered_kmax().
  double covered_kmax() const { return 1.5 * std::exp2(j_max_); }
  /// Content below this radius never touches the (truncated) top shell.
  double interior_kmax() const { return 0.75 * std::exp2(j_max_); }
  /// Support radius of shell j_max - 1: band limit for generated fields
  /// (shells above j_max - 1 empty, every populated shell fully resolved).
  double generator_kmax() const { return (8.0 / 3.0) * std::exp2(j_max_ - 1); }

  /// phi(2^-j k) samples over all modes; empty span for j out of range.
  std::span<const double> shell_multiplier(int j) const;
  bool has_shell(int j) const { return j >= j_min_ && j <= j_max_; }

  /// Multiplier of the low-pass S_j = chi(2^-j D); includes the mean mode.
  std::vector<double> lowpass_multiplier(int j) const;

 private:
  Grid grid_;
  int cutoff_N_;
  int j_min_;
  int j_max_;
  std::vector<std::vector<double>> mult_;  // per shell, flat over modes
};

DyadicBank build_bank(const Grid& g, int cutoff_N);

SpectralScalarField dyadic_block(const DyadicBank& bank,
                                 const SpectralScalarField& f, int j);
SpectralVectorField dyadic_block(const DyadicBank& bank,
                                 const SpectralVectorField& f, int j);
SpectralTensorField dyadic_block(const DyadicBank& bank,
                                 const SpectralTensorField& f, int j);

/// sum_{j<=N} dyadic blocks (mean excluded).
SpectralScalarField low_part(const DyadicBank& bank,
                             const SpectralScalarField& f);
SpectralVectorField low_part(const DyadicBank& bank,
                             const SpectralVectorField& f);
SpectralTensorField low_part(const DyadicBank& bank,
                             const SpectralTensorField& f);

/// sum_{j>N} dyadic blocks; low + high + mean = f on covered content.
SpectralScalarField high_part(const DyadicBank& bank,
                              const SpectralScalarField& f);
SpectralVectorField high_part(const DyadicBank& bank,
                              const SpectralVectorField& f);
SpectralTensorField high_part(const DyadicBank& bank,
                              const SpectralTensorField& f);

/// Low-pass S_j f (mean included).
SpectralScalarField lowpass(const DyadicBank& bank,
                            const SpectralScalarField& f, int j);

/// Grid quadrature ((L/n)^3 sum |f(x)|^p)^(1/p); p = kInf is the grid max.
/// Vector and tensor fields use the pointwise Euclidean / Frobenius
/// magnitude (off-diagonal tensor slots counted twice).
double lp_norm(const SpectralScalarField& f, int p);
double lp_norm(const SpectralVectorField& f, int p);
double lp_norm(const SpectralTensorField& f, int p);
double lp_norm_physical(const Grid& g, std::span<const double> magnitude,
                        int p);

/// ||dyadic_block(f, j)||_{L^p} for every shell, indexed j - j_min.
/// p = 2 is evaluated spectrally (Parseval); other p by quadrature.
std::vector<double> shell_lp_norms(const DyadicBank& bank,
                                   const SpectralScalarField& f, int p);
std::vector<double> shell_lp_norms(const DyadicBank& bank,
                                   const SpectralVectorField& f, int p);
std::vector<double> shell_lp_norms(const DyadicBank& bank,
                                   const SpectralTensorField& f, int p);
/// Generic component collection with Frobenius weights (used e.g. for the
/// full velocity Jacobian).
std::vector<double> shell_lp_norms_components(
    const DyadicBank& bank, std::span<const SpectralScalarField> comps,
    std::span<const double> weights, int p);

double besov_from_shell_norms(const DyadicBank& bank,
                              const std::vector<double>& shell_norms,
                              const BesovSpec& spec, ShellRange range);

double besov_norm(const DyadicBank& bank, const SpectralScalarField& f,
                  const BesovSpec& spec, ShellRange range = ShellRange::all);
double besov_norm(const DyadicBank& bank, const SpectralVectorField& f,
                  const BesovSpec& spec, ShellRange range = ShellRange::all);
double besov_norm(const DyadicBank& bank, const SpectralTensorField& f,
                  const BesovSpec& spec, ShellRange range = ShellRange::all);

/// Per-shell running suprema of ||dyadic_block(f)(t)||_{L^p} over the
/// sampled times; the Chemin-Lerner time norm puts sup_t inside the shell
/// sum, so these suprema are all the state it needs.
class TildeNormTracker {
 public:
  TildeNormTracker() = default;
  TildeNormTracker(const DyadicBank& bank, int p);

  int p() const { return p_; }
  double last_time() const { return last_t_; }
  const std::vector<double>& shell_sups() const { return sups_; }

  /// t must be nondecreasing across calls.
  template <typename Field>
  void update(const DyadicBank& bank, const Field& f, double t);

  double norm(const DyadicBank& bank, const BesovSpec& spec,
              ShellRange range) const;

 private:
  void advance_time(double t);
  int p_ = 2;
  double last_t_ = -1.0;
  std::vector<double> sups_;
};

}  // namespace ptt
