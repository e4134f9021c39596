#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "ptt/grid.hpp"

namespace ptt {

using cplx = std::complex<double>;

/// Fourier coefficients of a real scalar on a periodic grid.
/// Real fields satisfy coeff(-k) = conj(coeff(k)); the constructors keep
/// that property and nothing in the library breaks it.
class SpectralScalarField {
 public:
  SpectralScalarField() = default;
  explicit SpectralScalarField(const Grid& g) : grid_(g), coeffs_(g.size()) {}

  const Grid& grid() const { return grid_; }
  std::span<cplx> coeffs() { return coeffs_; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  cplx& operator[](std::size_t i) { return coeffs_[i]; }
  const cplx& operator[](std::size_t i) const { return coeffs_[i]; }

  cplx mean() const { return coeffs_.empty() ? cplx{} : coeffs_[0]; }
  void set_mean(cplx v) { coeffs_[0] = v; }

  SpectralScalarField& operator+=(const SpectralScalarField& o);
  SpectralScalarField& operator-=(const SpectralScalarField& o);
  SpectralScalarField& operator*=(double s);

  friend SpectralScalarField operator+(SpectralScalarField a,
                                       const SpectralScalarField& b) {
    a += b;
    return a;
  }
  friend SpectralScalarField operator-(SpectralScalarField a,
                                       const SpectralScalarField& b) {
    a -= b;
    return a;
  }
  friend SpectralScalarField operator*(double s, SpectralScalarField a) {
    a *= s;
    return a;
  }

 private:
  Grid grid_;
  std::vector<cplx> coeffs_;
};

/// Three scalar components; optionally flagged solenoidal (k.u(k) = 0).
struct SpectralVectorField {
  std::array<SpectralScalarField, 3> comp;
  bool solenoidal = false;

  SpectralVectorField() = default;
  explicit SpectralVectorField(const Grid& g)
      : comp{SpectralScalarField(g), SpectralScalarField(g),
             SpectralScalarField(g)} {}

  const Grid& grid() const { return comp[0].grid(); }
  SpectralScalarField& operator[](int i) { return comp[i]; }
  const SpectralScalarField& operator[](int i) const { return comp[i]; }

  SpectralVectorField& operator+=(const SpectralVectorField& o);
  SpectralVectorField& operator-=(const SpectralVectorField& o);
  SpectralVectorField& operator*=(double s);
  friend SpectralVectorField operator+(SpectralVectorField a,
                                       const SpectralVectorField& b) {
    a += b;
    return a;
  }
  friend SpectralVectorField operator-(SpectralVectorField a,
                                       const SpectralVectorField& b) {
    a -= b;
    return a;
  }
  friend SpectralVectorField operator*(double s, SpectralVectorField a) {
    a *= s;
    return a;
  }
};

/// Symmetric 3x3 tensor, upper-triangular storage: xx xy xz yy yz zz.
/// Symmetry is structural; there is no storage for an asymmetric part.
struct SpectralTensorField {
  static constexpr int n_comp = 6;
  std::array<SpectralScalarField, n_comp> comp;

  SpectralTensorField() = default;
  explicit SpectralTensorField(const Grid& g)
      : comp{SpectralScalarField(g), SpectralScalarField(g),
             SpectralScalarField(g), SpectralScalarField(g),
             SpectralScalarField(g), SpectralScalarField(g)} {}

  const Grid& grid() const { return comp[0].grid(); }

  /// Flat component index of entry (i, j).
  static int index(int i, int j) {
    static constexpr int map[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return map[i][j];
  }
  /// 2 for off-diagonal slots, 1 for diagonal (Frobenius weights).
  static double weight(int c) { return (c == 0 || c == 3 || c == 5) ? 1.0 : 2.0; }
  static bool is_diagonal(int c) { return c == 0 || c == 3 || c == 5; }

  SpectralScalarField& operator()(int i, int j) { return comp[index(i, j)]; }
  const SpectralScalarField& operator()(int i, int j) const {
    return comp[index(i, j)];
  }

  SpectralScalarField trace() const;

  SpectralTensorField& operator+=(const SpectralTensorField& o);
  SpectralTensorField& operator-=(const SpectralTensorField& o);
  SpectralTensorField& operator*=(double s);
  friend SpectralTensorField operator+(SpectralTensorField a,
                                       const SpectralTensorField& b) {
    a += b;
    return a;
  }
  friend SpectralTensorField operator-(SpectralTensorField a,
                                       const SpectralTensorField& b) {
    a -= b;
    return a;
  }
  friend SpectralTensorField operator*(double s, SpectralTensorField a) {
    a *= s;
    return a;
  }
};

/// Largest |coeff| over all modes (cheap blow-up / sanity probe).
double max_coeff_magnitude(const SpectralScalarField& f);
double max_coeff_magnitude(const SpectralVectorField& f);
double max_coeff_magnitude(const SpectralTensorField& f);

bool all_finite(const SpectralScalarField& f);
bool all_finite(const SpectralVectorField& f);
bool all_finite(const SpectralTensorField& f);

/// Max over modes of |coeff(-k) - conj(coeff(k))| relative to the field scale.
double hermitian_defect(const SpectralScalarField& f);

/// Force exact Hermitian symmetry by averaging conjugate pairs.
void hermitian_symmetrize(SpectralScalarField& f);

}  // namespace ptt
