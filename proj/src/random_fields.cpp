#include "ptt/random_fields.hpp"

#include <cmath>

#include "ptt/operators.hpp"

namespace ptt {

double GaussianSampler::uniform() {
  // 53 random bits into (0,1); the +0.5 offset keeps 0 out of the range.
  const std::uint64_t bits = rng_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1p-53;
}

double GaussianSampler::operator()() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = two_pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

SpectralScalarField random_scalar_field(const Grid& g, GaussianSampler& gauss,
                                        double k_max) {
  SpectralScalarField f(g);
  auto c = f.coeffs();
  std::size_t flat = 0;
  for (int ix = 0; ix < g.n; ++ix) {
    const int fx = g.freq(ix);
    for (int iy = 0; iy < g.n; ++iy) {
      const int fy = g.freq(iy);
      for (int iz = 0; iz < g.n; ++iz, ++flat) {
        const int fz = g.freq(iz);
        const double k =
            g.wave_unit() * std::sqrt(double(fx) * fx + double(fy) * fy +
                                      double(fz) * fz);
        // Draw for every mode so the stream layout is independent of k_max.
        const double re = gauss();
        const double im = gauss();
        if (k == 0.0 || k > k_max || !in_dealias_band(g, fx, fy, fz)) continue;
        c[flat] = cplx(re, im) / (k * k);
      }
    }
  }
  hermitian_symmetrize(f);
  return f;
}

SpectralVectorField random_vector_field(const Grid& g, GaussianSampler& gauss,
                                        double k_max) {
  SpectralVectorField v(g);
  for (int i = 0; i < 3; ++i) v[i] = random_scalar_field(g, gauss, k_max);
  return v;
}

SpectralVectorField random_solenoidal_field(const Grid& g,
                                            GaussianSampler& gauss,
                                            double k_max) {
  return leray_project(random_vector_field(g, gauss, k_max));
}

SpectralTensorField random_tensor_field(const Grid& g, GaussianSampler& gauss,
                                        double k_max) {
  SpectralTensorField t(g);
  for (int i = 0; i < SpectralTensorField::n_comp; ++i)
    t.comp[i] = random_scalar_field(g, gauss, k_max);
  return t;
}

}  // namespace ptt
