#include "ptt/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ptt/fft.hpp"

namespace ptt {

namespace {

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// Smooth step: 0 at x<=0, 1 at x>=1.
double smoothstep(double x) {
  const double a = bump(x);
  const double b = bump(1.0 - x);
  return a / (a + b);
}

constexpr double chi_flat = 0.75;       // chi == 1 below this radius
constexpr double chi_cut = 4.0 / 3.0;   // chi == 0 above this radius

std::vector<double> magnitude_physical(const SpectralScalarField& f) {
  auto v = to_physical(f);
  for (auto& x : v) x = std::abs(x);
  return v;
}

std::vector<double> magnitude_physical(const SpectralVectorField& f) {
  auto p = to_physical(f);
  std::vector<double> m(p.comp[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    m[i] = std::sqrt(p.comp[0][i] * p.comp[0][i] +
                     p.comp[1][i] * p.comp[1][i] +
                     p.comp[2][i] * p.comp[2][i]);
  return m;
}

std::vector<double> magnitude_physical(const SpectralTensorField& f) {
  auto p = to_physical(f);
  std::vector<double> m(p.comp[0].size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    double acc = 0.0;
    for (int c = 0; c < SpectralTensorField::n_comp; ++c)
      acc += SpectralTensorField::weight(c) * p.comp[c][i] * p.comp[c][i];
    m[i] = std::sqrt(acc);
  }
  return m;
}

SpectralScalarField apply_multiplier(const SpectralScalarField& f,
                                     std::span<const double> m) {
  SpectralScalarField out(f.grid());
  auto o = out.coeffs();
  const auto in = f.coeffs();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = m[i] * in[i];
  return out;
}

// Accumulated low/high split multipliers.
std::vector<double> split_multiplier(const DyadicBank& bank, bool low) {
  const Grid& g = bank.grid();
  std::vector<double> m(g.size(), 0.0);
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
    if (low != (j <= bank.cutoff())) continue;
    const auto phi = bank.shell_multiplier(j);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += phi[i];
  }
  m[0] = 0.0;  // mean handled separately from the split
  return m;
}

template <typename Field>
Field blocks_sum(const DyadicBank& bank, const Field& f, bool low) {
  const auto m = split_multiplier(bank, low);
  Field out = f;
  if constexpr (std::is_same_v<Field, SpectralScalarField>) {
    out = apply_multiplier(f, m);
  } else if constexpr (std::is_same_v<Field, SpectralVectorField>) {
    for (int i = 0; i < 3; ++i) out[i] = apply_multiplier(f[i], m);
    out.solenoidal = f.solenoidal;
  } else {
    for (int i = 0; i < SpectralTensorField::n_comp; ++i)
      out.comp[i] = apply_multiplier(f.comp[i], m);
  }
  return out;
}

double spectral_l2(const Grid& g, std::span<const double> mult,
                   std::span<const cplx> coeffs, double weight) {
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double w = mult[i];
    if (w == 0.0) continue;
    acc += w * w * std::norm(coeffs[i]);
  }
  return weight * acc * g.volume();
}

}  // namespace

double lp_chi(double r) {
  r = std::abs(r);
  if (r <= chi_flat) return 1.0;
  if (r >= chi_cut) return 0.0;
  return 1.0 - smoothstep((r - chi_flat) / (chi_cut - chi_flat));
}

double lp_phi(double r) { return lp_chi(0.5 * r) - lp_chi(r); }

DyadicBank::DyadicBank(const Grid& g, int cutoff_N)
    : grid_(g), cutoff_N_(cutoff_N) {
  const double k_min = g.wave_unit();
  const double k_nyq = g.wave_unit() * (g.n / 2);
  j_min_ = static_cast<int>(std::ceil(std::log2(0.375 * k_min)));
  j_max_ = static_cast<int>(std::ceil(std::log2(0.375 * k_nyq)));
  if (shell_count() < 4)
    throw std::invalid_argument("DyadicBank: grid holds fewer than 4 shells");
  if (cutoff_N_ < j_min_ || cutoff_N_ >= j_max_)
    throw std::invalid_argument(
        "DyadicBank: cutoff must lie inside the resolvable shells");
  mult_.resize(shell_count());
  for (int j = j_min_; j <= j_max_; ++j) {
    auto& m = mult_[j - j_min_];
    m.resize(g.size());
    const double scale = std::exp2(-j);
    for_each_mode(g, [&](std::size_t i, double kx, double ky, double kz) {
      const double k = std::sqrt(kx * kx + ky * ky + kz * kz);
      m[i] = k == 0.0 ? 0.0 : lp_phi(scale * k);
    });
  }
}

std::span<const double> DyadicBank::shell_multiplier(int j) const {
  if (!has_shell(j)) return {};
  return mult_[j - j_min_];
}

std::vector<double> DyadicBank::lowpass_multiplier(int j) const {
  std::vector<double> m(grid_.size());
  const double scale = std::exp2(-j);
  for_each_mode(grid_, [&](std::size_t i, double kx, double ky, double kz) {
    m[i] = lp_chi(scale * std::sqrt(kx * kx + ky * ky + kz * kz));
  });
  return m;
}

DyadicBank build_bank(const Grid& g, int cutoff_N) {
  return DyadicBank(g, cutoff_N);
}

SpectralScalarField dyadic_block(const DyadicBank& bank,
                                 const SpectralScalarField& f, int j) {
  if (!bank.has_shell(j)) return SpectralScalarField(f.grid());
  return apply_multiplier(f, bank.shell_multiplier(j));
}

SpectralVectorField dyadic_block(const DyadicBank& bank,
                                 const SpectralVectorField& f, int j) {
  SpectralVectorField out(f.grid());
  for (int i = 0; i < 3; ++i) out[i] = dyadic_block(bank, f[i], j);
  out.solenoidal = f.solenoidal;
  return out;
}

SpectralTensorField dyadic_block(const DyadicBank& bank,
                                 const SpectralTensorField& f, int j) {
  SpectralTensorField out(f.grid());
  for (int i = 0; i < SpectralTensorField::n_comp; ++i)
    out.comp[i] = dyadic_block(bank, f.comp[i], j);
  return out;
}

SpectralScalarField low_part(const DyadicBank& bank,
                             const SpectralScalarField& f) {
  return blocks_sum(bank, f, true);
}
SpectralVectorField low_part(const DyadicBank& bank,
                             const SpectralVectorField& f) {
  return blocks_sum(bank, f, true);
}
SpectralTensorField low_part(const DyadicBank& bank,
                             const SpectralTensorField& f) {
  return blocks_sum(bank, f, true);
}

SpectralScalarField high_part(const DyadicBank& bank,
                              const SpectralScalarField& f) {
  return blocks_sum(bank, f, false);
}
SpectralVectorField high_part(const DyadicBank& bank,
                              const SpectralVectorField& f) {
  return blocks_sum(bank, f, false);
}
SpectralTensorField high_part(const DyadicBank& bank,
                              const SpectralTensorField& f) {
  return blocks_sum(bank, f, false);
}

SpectralScalarField lowpass(const DyadicBank& bank,
                            const SpectralScalarField& f, int j) {
  return apply_multiplier(f, bank.lowpass_multiplier(j));
}

double lp_norm_physical(const Grid& g, std::span<const double> magnitude,
                        int p) {
  if (p == kInf) {
    double m = 0.0;
    for (double v : magnitude) m = std::max(m, std::abs(v));
    return m;
  }
  if (p < 1) throw std::invalid_argument("lp_norm: p must be >= 1");
  double acc = 0.0;
  if (p == 2) {
    for (double v : magnitude) acc += v * v;
  } else {
    for (double v : magnitude) acc += std::pow(std::abs(v), p);
  }
  return std::pow(g.cell_volume() * acc, 1.0 / p);
}

double lp_norm(const SpectralScalarField& f, int p) {
  return lp_norm_physical(f.grid(), magnitude_physical(f), p);
}
double lp_norm(const SpectralVectorField& f, int p) {
  return lp_norm_physical(f.grid(), magnitude_physical(f), p);
}
double lp_norm(const SpectralTensorField& f, int p) {
  return lp_norm_physical(f.grid(), magnitude_physical(f), p);
}

namespace {

template <typename Field>
std::vector<double> shell_lp_norms_impl(const DyadicBank& bank, const Field& f,
                                        int p) {
  std::vector<double> out(bank.shell_count(), 0.0);
  if (p == 2) {
    const Grid& g = bank.grid();
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
      const auto m = bank.shell_multiplier(j);
      double acc = 0.0;
      if constexpr (std::is_same_v<Field, SpectralScalarField>) {
        acc = spectral_l2(g, m, f.coeffs(), 1.0);
      } else if constexpr (std::is_same_v<Field, SpectralVectorField>) {
        for (int c = 0; c < 3; ++c)
          acc += spectral_l2(g, m, f[c].coeffs(), 1.0);
      } else {
        for (int c = 0; c < SpectralTensorField::n_comp; ++c)
          acc += spectral_l2(g, m, f.comp[c].coeffs(),
                             SpectralTensorField::weight(c));
      }
      out[j - bank.j_min()] = std::sqrt(std::max(0.0, acc));
    }
    return out;
  }
  for (int j = bank.j_min(); j <= bank.j_max(); ++j)
    out[j - bank.j_min()] = lp_norm(dyadic_block(bank, f, j), p);
  return out;
}

}  // namespace

std::vector<double> shell_lp_norms_components(
    const DyadicBank& bank, std::span<const SpectralScalarField> comps,
    std::span<const double> weights, int p) {
  const Grid& g = bank.grid();
  std::vector<double> out(bank.shell_count(), 0.0);
  if (p == 2) {
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
      const auto m = bank.shell_multiplier(j);
      double acc = 0.0;
      for (std::size_t c = 0; c < comps.size(); ++c)
        acc += spectral_l2(g, m, comps[c].coeffs(), weights[c]);
      out[j - bank.j_min()] = std::sqrt(std::max(0.0, acc));
    }
    return out;
  }
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
    std::vector<double> mag(g.size(), 0.0);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const auto phys = to_physical(dyadic_block(bank, comps[c], j));
      for (std::size_t x = 0; x < mag.size(); ++x)
        mag[x] += weights[c] * phys[x] * phys[x];
    }
    for (auto& v : mag) v = std::sqrt(v);
    out[j - bank.j_min()] = lp_norm_physical(g, mag, p);
  }
  return out;
}

std::vector<double> shell_lp_norms(const DyadicBank& bank,
                                   const SpectralScalarField& f, int p) {
  return shell_lp_norms_impl(bank, f, p);
}
std::vector<double> shell_lp_norms(const DyadicBank& bank,
                                   const SpectralVectorField& f, int p) {
  return shell_lp_norms_impl(bank, f, p);
}
std::vector<double> shell_lp_norms(const DyadicBank& bank,
                                   const SpectralTensorField& f, int p) {
  return shell_lp_norms_impl(bank, f, p);
}

double besov_from_shell_norms(const DyadicBank& bank,
                              const std::vector<double>& shell_norms,
                              const BesovSpec& spec, ShellRange range) {
  double sum = 0.0;
  double sup = 0.0;
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
    if (range == ShellRange::low && j > bank.cutoff()) continue;
    if (range == ShellRange::high && j <= bank.cutoff()) continue;
    const double w =
        std::exp2(spec.s * j) * shell_norms[static_cast<std::size_t>(j - bank.j_min())];
    if (spec.r == kInf) {
      sup = std::max(sup, w);
    } else if (spec.r == 1) {
      sum += w;
    } else {
      sum += std::pow(w, spec.r);
    }
  }
  if (spec.r == kInf) return sup;
  if (spec.r == 1) return sum;
  return std::pow(sum, 1.0 / spec.r);
}

double besov_norm(const DyadicBank& bank, const SpectralScalarField& f,
                  const BesovSpec& spec, ShellRange range) {
  return besov_from_shell_norms(bank, shell_lp_norms(bank, f, spec.p), spec,
                                range);
}
double besov_norm(const DyadicBank& bank, const SpectralVectorField& f,
                  const BesovSpec& spec, ShellRange range) {
  return besov_from_shell_norms(bank, shell_lp_norms(bank, f, spec.p), spec,
                                range);
}
double besov_norm(const DyadicBank& bank, const SpectralTensorField& f,
                  const BesovSpec& spec, ShellRange range) {
  return besov_from_shell_norms(bank, shell_lp_norms(bank, f, spec.p), spec,
                                range);
}

TildeNormTracker::TildeNormTracker(const DyadicBank& bank, int p)
    : p_(p), sups_(bank.shell_count(), 0.0) {}

void TildeNormTracker::advance_time(double t) {
  if (t < last_t_)
    throw std::invalid_argument("TildeNormTracker: time must not decrease");
  last_t_ = t;
}

template <typename Field>
void TildeNormTracker::update(const DyadicBank& bank, const Field& f,
                              double t) {
  advance_time(t);
  const auto norms = shell_lp_norms(bank, f, p_);
  if (sups_.size() != norms.size())
    throw std::invalid_argument("TildeNormTracker: bank mismatch");
  for (std::size_t i = 0; i < sups_.size(); ++i)
    sups_[i] = std::max(sups_[i], norms[i]);
}

template void TildeNormTracker::update(const DyadicBank&,
                                       const SpectralScalarField&, double);
template void TildeNormTracker::update(const DyadicBank&,
                                       const SpectralVectorField&, double);
template void TildeNormTracker::update(const DyadicBank&,
                                       const SpectralTensorField&, double);

double TildeNormTracker::norm(const DyadicBank& bank, const BesovSpec& spec,
                              ShellRange range) const {
  if (spec.p != p_)
    throw std::invalid_argument("TildeNormTracker: Lp index mismatch");
  return besov_from_shell_norms(bank, sups_, spec, range);
}

}  // namespace ptt
