#include "ptt/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptt {

namespace {

void check_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("field grids differ");
}

}  // namespace

SpectralScalarField& SpectralScalarField::operator+=(
    const SpectralScalarField& o) {
  check_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralScalarField& SpectralScalarField::operator-=(
    const SpectralScalarField& o) {
  check_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralScalarField& SpectralScalarField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralVectorField& SpectralVectorField::operator+=(
    const SpectralVectorField& o) {
  for (int i = 0; i < 3; ++i) comp[i] += o.comp[i];
  solenoidal = solenoidal && o.solenoidal;
  return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(
    const SpectralVectorField& o) {
  for (int i = 0; i < 3; ++i) comp[i] -= o.comp[i];
  solenoidal = solenoidal && o.solenoidal;
  return *this;
}

SpectralVectorField& SpectralVectorField::operator*=(double s) {
  for (int i = 0; i < 3; ++i) comp[i] *= s;
  return *this;
}

SpectralScalarField SpectralTensorField::trace() const {
  SpectralScalarField t(grid());
  const auto& xx = comp[0].coeffs();
  const auto& yy = comp[3].coeffs();
  const auto& zz = comp[5].coeffs();
  auto out = t.coeffs();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = xx[i] + yy[i] + zz[i];
  return t;
}

SpectralTensorField& SpectralTensorField::operator+=(
    const SpectralTensorField& o) {
  for (int i = 0; i < n_comp; ++i) comp[i] += o.comp[i];
  return *this;
}

SpectralTensorField& SpectralTensorField::operator-=(
    const SpectralTensorField& o) {
  for (int i = 0; i < n_comp; ++i) comp[i] -= o.comp[i];
  return *this;
}

SpectralTensorField& SpectralTensorField::operator*=(double s) {
  for (int i = 0; i < n_comp; ++i) comp[i] *= s;
  return *this;
}

double max_coeff_magnitude(const SpectralScalarField& f) {
  double m = 0.0;
  for (const auto& c : f.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

double max_coeff_magnitude(const SpectralVectorField& f) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) m = std::max(m, max_coeff_magnitude(f[i]));
  return m;
}

double max_coeff_magnitude(const SpectralTensorField& f) {
  double m = 0.0;
  for (const auto& c : f.comp) m = std::max(m, max_coeff_magnitude(c));
  return m;
}

bool all_finite(const SpectralScalarField& f) {
  for (const auto& c : f.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

bool all_finite(const SpectralVectorField& f) {
  return all_finite(f[0]) && all_finite(f[1]) && all_finite(f[2]);
}

bool all_finite(const SpectralTensorField& f) {
  for (const auto& c : f.comp)
    if (!all_finite(c)) return false;
  return true;
}

double hermitian_defect(const SpectralScalarField& f) {
  const Grid& g = f.grid();
  const double scale = std::max(max_coeff_magnitude(f), 1e-300);
  double worst = 0.0;
  for (int ix = 0; ix < g.n; ++ix) {
    const int mx = ix == 0 ? 0 : g.n - ix;
    for (int iy = 0; iy < g.n; ++iy) {
      const int my = iy == 0 ? 0 : g.n - iy;
      for (int iz = 0; iz < g.n; ++iz) {
        const int mz = iz == 0 ? 0 : g.n - iz;
        const cplx a = f[g.flat(ix, iy, iz)];
        const cplx b = f[g.flat(mx, my, mz)];
        worst = std::max(worst, std::abs(a - std::conj(b)));
      }
    }
  }
  return worst / scale;
}

void hermitian_symmetrize(SpectralScalarField& f) {
  const Grid& g = f.grid();
  for (int ix = 0; ix < g.n; ++ix) {
    const int mx = ix == 0 ? 0 : g.n - ix;
    for (int iy = 0; iy < g.n; ++iy) {
      const int my = iy == 0 ? 0 : g.n - iy;
      for (int iz = 0; iz < g.n; ++iz) {
        const int mz = iz == 0 ? 0 : g.n - iz;
        const std::size_t a = g.flat(ix, iy, iz);
        const std::size_t b = g.flat(mx, my, mz);
        if (b < a) continue;
        const cplx v = 0.5 * (f[a] + std::conj(f[b]));
        f[a] = v;
        f[b] = std::conj(v);
      }
    }
  }
}

}  // namespace ptt
