#include "ptt/lagrangian.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

#include "ptt/fft.hpp"

namespace ptt {

Vec3 wrap_position(const Grid& g, Vec3 x) {
  for (int i = 0; i < 3; ++i) {
    x[i] = std::fmod(x[i], g.box_length);
    if (x[i] < 0.0) x[i] += g.box_length;
  }
  return x;
}

double trilinear_sample(const Grid& g, std::span<const double> values,
                        Vec3 x) {
  x = wrap_position(g, x);
  const double h = g.spacing();
  int idx[3];
  double frac[3];
  for (int i = 0; i < 3; ++i) {
    const double s = x[i] / h;
    idx[i] = static_cast<int>(std::floor(s)) % g.n;
    frac[i] = s - std::floor(s);
  }
  double acc = 0.0;
  for (int dx = 0; dx < 2; ++dx) {
    const int ix = (idx[0] + dx) % g.n;
    const double wx = dx ? frac[0] : 1.0 - frac[0];
    for (int dy = 0; dy < 2; ++dy) {
      const int iy = (idx[1] + dy) % g.n;
      const double wy = dy ? frac[1] : 1.0 - frac[1];
      for (int dz = 0; dz < 2; ++dz) {
        const int iz = (idx[2] + dz) % g.n;
        const double wz = dz ? frac[2] : 1.0 - frac[2];
        acc += wx * wy * wz * values[g.flat(ix, iy, iz)];
      }
    }
  }
  return acc;
}

double spectral_sample(const SpectralScalarField& f, Vec3 x) {
  const Grid& g = f.grid();
  const double wu = g.wave_unit();
  std::vector<cplx> px(g.n), py(g.n), pz(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double k = wu * g.freq(i);
    px[i] = std::polar(1.0, k * x[0]);
    py[i] = std::polar(1.0, k * x[1]);
    pz[i] = std::polar(1.0, k * x[2]);
  }
  const auto c = f.coeffs();
  cplx acc{};
  std::size_t flat = 0;
  for (int ix = 0; ix < g.n; ++ix) {
    cplx accx{};
    for (int iy = 0; iy < g.n; ++iy) {
      cplx accy{};
      for (int iz = 0; iz < g.n; ++iz, ++flat) accy += c[flat] * pz[iz];
      accx += accy * py[iy];
    }
    acc += accx * px[ix];
  }
  return acc.real();
}

double sample_scalar(const SpectralScalarField& f,
                     std::span<const double> physical, Vec3 x,
                     SamplingMode mode) {
  if (mode == SamplingMode::spectral) return spectral_sample(f, x);
  return trilinear_sample(f.grid(), physical, x);
}

ParticleSet advect(const ParticleSet& particles, const SpectralVectorField& u,
                   double dt, SamplingMode mode) {
  const Grid& g = u.grid();
  PhysicalVector u_phys;
  if (mode == SamplingMode::trilinear) u_phys = to_physical(u);

  auto velocity = [&](const Vec3& x) -> Vec3 {
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
      v[i] = mode == SamplingMode::spectral
                 ? spectral_sample(u[i], x)
                 : trilinear_sample(g, u_phys.comp[i], x);
    }
    return v;
  };

  ParticleSet out = particles;
  for (auto& q : out.positions) {
    const Vec3 k1 = velocity(q);
    Vec3 q2, q3, q4;
    for (int i = 0; i < 3; ++i) q2[i] = q[i] + 0.5 * dt * k1[i];
    const Vec3 k2 = velocity(q2);
    for (int i = 0; i < 3; ++i) q3[i] = q[i] + 0.5 * dt * k2[i];
    const Vec3 k3 = velocity(q3);
    for (int i = 0; i < 3; ++i) q4[i] = q[i] + dt * k3[i];
    const Vec3 k4 = velocity(q4);
    for (int i = 0; i < 3; ++i)
      q[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    q = wrap_position(g, q);
  }
  return out;
}

double riccati_exact(double y0, double t) {
  const double denom = 1.0 + y0 * t;
  if (denom <= 0.0)
    throw std::domain_error("riccati_exact: at or beyond the blow-up time");
  return y0 / denom;
}

double blowup_time(double y0) {
  if (y0 < 0.0) return -1.0 / y0;
  return std::numeric_limits<double>::infinity();
}

std::vector<TrajectoryReport> trace_along_trajectory(
    const std::vector<ParticleSample>& samples) {
  std::map<int, TrajectoryReport> by_particle;
  std::map<int, double> y0_of;
  for (const auto& s : samples) {
    auto [it, fresh] = by_particle.try_emplace(s.particle_id);
    TrajectoryReport& rep = it->second;
    if (fresh) {
      rep.particle_id = s.particle_id;
      // reconstruct y0 from the stored exact value at the first sample
      y0_of[s.particle_id] =
          s.t == 0.0 ? s.tr_tau_exact
                     : s.tr_tau_exact / (1.0 - s.tr_tau_exact * s.t);
    }
    const double y0 = y0_of[s.particle_id];
    if (rep.truncated_at_blowup) continue;
    if (s.t >= blowup_time(y0)) {
      rep.truncated_at_blowup = true;
      continue;
    }
    const double exact = riccati_exact(y0, s.t);
    const double scale = std::max(std::abs(exact), 1e-300);
    rep.max_rel_deviation = std::max(
        rep.max_rel_deviation, std::abs(s.tr_tau_sampled - exact) / scale);
    rep.last_time = s.t;
  }
  std::vector<TrajectoryReport> out;
  out.reserve(by_particle.size());
  for (auto& [id, rep] : by_particle) out.push_back(rep);
  return out;
}

}  // namespace ptt
