#include "ptt/operators.hpp"

#include <cmath>

namespace ptt {

namespace {

// Modes with an axis frequency of exactly n/2 have no negation partner on
// the grid; odd multipliers are ill-defined there.
bool at_nyquist(const Grid& g, std::size_t flat) {
  const auto [ix, iy, iz] = g.unflat(flat);
  const int ny = g.n / 2;
  return g.freq(ix) == ny || g.freq(iy) == ny || g.freq(iz) == ny;
}

}  // namespace

SpectralVectorField gradient(const SpectralScalarField& f) {
  const Grid& g = f.grid();
  SpectralVectorField out(g);
  const auto in = f.coeffs();
  auto gx = out[0].coeffs();
  auto gy = out[1].coeffs();
  auto gz = out[2].coeffs();
  for_each_mode(g, [&](std::size_t i, double kx, double ky, double kz) {
    if (at_nyquist(g, i)) return;
    const cplx v = in[i];
    gx[i] = cplx(-kx * v.imag(), kx * v.real());
    gy[i] = cplx(-ky * v.imag(), ky * v.real());
    gz[i] = cplx(-kz * v.imag(), kz * v.real());
  });
  return out;
}

SpectralScalarField divergence(const SpectralVectorField& v) {
  const Grid& g = v.grid();
  SpectralScalarField out(g);
  const auto vx = v[0].coeffs();
  const auto vy = v[1].coeffs();
  const auto vz = v[2].coeffs();
  auto o = out.coeffs();
  for_each_mode(g, [&](std::size_t i, double kx, double ky, double kz) {
    if (at_nyquist(g, i)) return;
    const cplx s = kx * vx[i] + ky * vy[i] + kz * vz[i];
    o[i] = cplx(-s.imag(), s.real());
  });
  return out;
}

SpectralVectorField divergence(const SpectralTensorField& s) {
  const Grid& g = s.grid();
  SpectralVectorField out(g);
  std::array<std::span<const cplx>, 6> c;
  for (int i = 0; i < 6; ++i) c[i] = s.comp[i].coeffs();
  std::array<std::span<cplx>, 3> o = {out[0].coeffs(), out[1].coeffs(),
                                      out[2].coeffs()};
  for_each_mode(g, [&](std::size_t i, double kx, double ky, double kz) {
    if (at_nyquist(g, i)) return;
    const double k[3] = {kx, ky, kz};
    for (int r = 0; r < 3; ++r) {
      cplx acc{};
      for (int cidx = 0; cidx < 3; ++cidx)
        acc += k[cidx] * c[SpectralTensorField::index(r, cidx)][i];
      o[r][i] = cplx(-acc.imag(), acc.real());
    }
  });
  return out;
}

SpectralScalarField laplacian(const SpectralScalarField& f) {
  const Grid& g = f.grid();
  SpectralScalarField out(g);
  const auto in = f.coeffs();
  auto o = out.coeffs();
  for_each_mode(g, [&](std::size_t i, double kx, double ky, double kz) {
    o[i] = -(kx * kx + ky * ky + kz * kz) * in[i];
  });
  return out;
}

SpectralVectorField laplacian(const SpectralVectorField& f) {
  SpectralVectorField out(f.grid());
  for (int i = 0; i < 3; ++i) out[i] = laplacian(f[i]);
  out.solenoidal = f.solenoidal;
  return out;
}

SpectralScalarField fractional_lambda(const SpectralScalarField& f, double s) {
  const Grid& g = f.grid();
  if (s == 0.0) return f;
  SpectralScalarField out(g);
  const auto in = f.coeffs();
  auto o = out.coeffs();
  const double half_s = 0.5 * s;
  for_each_mode(g, [&](std::size_t i, double kx, double ky, double kz) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    o[i] = k2 == 0.0 ? cplx{} : std::pow(k2, half_s) * in[i];
  });
  return out;
}

SpectralVectorField fractional_lambda(const SpectralVectorField& f, double s) {
  SpectralVectorField out(f.grid());
  for (int i = 0; i < 3; ++i) out[i] = fractional_lambda(f[i], s);
  out.solenoidal = f.solenoidal;
  return out;
}

SpectralVectorField leray_project(const SpectralVectorField& v) {
  const Grid& g = v.grid();
  SpectralVectorField out(g);
  const auto vx = v[0].coeffs();
  const auto vy = v[1].coeffs();
  const auto vz = v[2].coeffs();
  auto ox = out[0].coeffs();
  auto oy = out[1].coeffs();
  auto oz = out[2].coeffs();
  for_each_mode(g, [&](std::size_t i, double kx, double ky, double kz) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    if (k2 == 0.0) {  // zero mode passes through
      ox[i] = vx[i];
      oy[i] = vy[i];
      oz[i] = vz[i];
      return;
    }
    if (at_nyquist(g, i)) return;
    const cplx kdotv = (kx * vx[i] + ky * vy[i] + kz * vz[i]) / k2;
    ox[i] = vx[i] - kx * kdotv;
    oy[i] = vy[i] - ky * kdotv;
    oz[i] = vz[i] - kz * kdotv;
  });
  out.solenoidal = true;
  return out;
}

SpectralVectorField lambda_inv_p_div(const SpectralTensorField& s) {
  const Grid& g = s.grid();
  SpectralVectorField out(g);
  std::array<std::span<const cplx>, 6> c;
  for (int i = 0; i < 6; ++i) c[i] = s.comp[i].coeffs();
  std::array<std::span<cplx>, 3> o = {out[0].coeffs(), out[1].coeffs(),
                                      out[2].coeffs()};
  for_each_mode(g, [&](std::size_t i, double kx, double ky, double kz) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    if (k2 == 0.0 || at_nyquist(g, i)) return;
    const double k[3] = {kx, ky, kz};
    cplx d[3];
    for (int r = 0; r < 3; ++r) {
      cplx acc{};
      for (int cidx = 0; cidx < 3; ++cidx)
        acc += k[cidx] * c[SpectralTensorField::index(r, cidx)][i];
      d[r] = cplx(-acc.imag(), acc.real());  // i * k_j * s_rj
    }
    const cplx kdotd = (k[0] * d[0] + k[1] * d[1] + k[2] * d[2]) / k2;
    const double inv_norm = 1.0 / std::sqrt(k2);
    for (int r = 0; r < 3; ++r) o[r][i] = (d[r] - k[r] * kdotd) * inv_norm;
  });
  out.solenoidal = true;
  return out;
}

bool in_dealias_band(const Grid& g, int fx, int fy, int fz) {
  const int cut = g.n / 3;
  return std::abs(fx) <= cut && std::abs(fy) <= cut && std::abs(fz) <= cut;
}

void dealias(SpectralScalarField& f) {
  const Grid& g = f.grid();
  auto c = f.coeffs();
  std::size_t flat = 0;
  for (int ix = 0; ix < g.n; ++ix) {
    const int fx = g.freq(ix);
    for (int iy = 0; iy < g.n; ++iy) {
      const int fy = g.freq(iy);
      for (int iz = 0; iz < g.n; ++iz, ++flat) {
        if (!in_dealias_band(g, fx, fy, g.freq(iz))) c[flat] = cplx{};
      }
    }
  }
}

void dealias(SpectralVectorField& f) {
  for (int i = 0; i < 3; ++i) dealias(f[i]);
}

void dealias(SpectralTensorField& f) {
  for (auto& c : f.comp) dealias(c);
}

double inner(const SpectralScalarField& a, const SpectralScalarField& b) {
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  double acc = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i)
    acc += ca[i].real() * cb[i].real() + ca[i].imag() * cb[i].imag();
  return acc * a.grid().volume();
}

double inner(const SpectralVectorField& a, const SpectralVectorField& b) {
  return inner(a[0], b[0]) + inner(a[1], b[1]) + inner(a[2], b[2]);
}

double inner(const SpectralTensorField& a, const SpectralTensorField& b) {
  double acc = 0.0;
  for (int c = 0; c < SpectralTensorField::n_comp; ++c)
    acc += SpectralTensorField::weight(c) * inner(a.comp[c], b.comp[c]);
  return acc;
}

double l2_norm(const SpectralScalarField& f) {
  return std::sqrt(std::max(0.0, inner(f, f)));
}
double l2_norm(const SpectralVectorField& f) {
  return std::sqrt(std::max(0.0, inner(f, f)));
}
double l2_norm(const SpectralTensorField& f) {
  return std::sqrt(std::max(0.0, inner(f, f)));
}

double divergence_defect(const SpectralVectorField& v) {
  const Grid& g = v.grid();
  const double scale = std::max(max_coeff_magnitude(v), 1e-300);
  const auto vx = v[0].coeffs();
  const auto vy = v[1].coeffs();
  const auto vz = v[2].coeffs();
  double worst = 0.0;
  for_each_mode(g, [&](std::size_t i, double kx, double ky, double kz) {
    if (at_nyquist(g, i)) return;
    const double knorm = std::sqrt(kx * kx + ky * ky + kz * kz);
    if (knorm == 0.0) return;
    const cplx kv = kx * vx[i] + ky * vy[i] + kz * vz[i];
    worst = std::max(worst, std::abs(kv) / knorm);
  });
  return worst / scale;
}

}  // namespace ptt
