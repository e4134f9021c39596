#pragma once

#include <array>
#include <limits>
#include <vector>

#include "ptt/field.hpp"

namespace ptt {

using Vec3 = std::array<double, 3>;

enum class SamplingMode { trilinear, spectral };

/// Tracer particles in the periodic box; positions stay wrapped to [0, L)^3.
struct ParticleSet {
  std::vector<Vec3> positions;
  std::vector<int> labels;
  std::vector<double> initial_trace_values;

  std::size_t size() const { return positions.size(); }
};

Vec3 wrap_position(const Grid& g, Vec3 x);

/// Trilinear interpolation of physical-space samples at x.
double trilinear_sample(const Grid& g, std::span<const double> values, Vec3 x);

/// Exact evaluation of the band-limited field at x (separable phase sums).
double spectral_sample(const SpectralScalarField& f, Vec3 x);

double sample_scalar(const SpectralScalarField& f,
                     std::span<const double> physical, Vec3 x,
                     SamplingMode mode);

/// One RK4 update of dq/dt = u(q) with the velocity frozen over the step.
/// Trilinear sampling is the fast default; spectral sampling is the exact
/// (slow) mode used when interpolation error would pollute a comparison.
ParticleSet advect(const ParticleSet& particles, const SpectralVectorField& u,
                   double dt, SamplingMode mode = SamplingMode::trilinear);

/// Closed-form trace transport along a characteristic: y0 / (1 + y0 t).
/// Throws std::domain_error at or beyond the blow-up time.
double riccati_exact(double y0, double t);

/// -1/y0 for y0 < 0, +infinity otherwise.
double blowup_time(double y0);

/// One recorded sample of a tracked characteristic.
struct ParticleSample {
  double t = 0.0;
  int particle_id = 0;
  Vec3 position{};
  double tr_tau_sampled = 0.0;
  double tr_tau_exact = 0.0;
};

struct TrajectoryReport {
  int particle_id = 0;
  double max_rel_deviation = 0.0;
  double last_time = 0.0;
  bool truncated_at_blowup = false;
};

/// Deviation of the sampled series from the closed form, per particle.
/// Samples past the blow-up time of the particle's initial value truncate
/// the series and flag the report.
std::vector<TrajectoryReport> trace_along_trajectory(
    const std::vector<ParticleSample>& samples);

}  // namespace ptt
