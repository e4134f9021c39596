#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <stdexcept>

namespace ptt {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Uniform periodic grid on [0, L)^3 with n collocation points per axis.
/// Spectral storage is full complex (c2c layout): flat index
/// ((ix*n)+iy)*n+iz holds the mode with integer frequencies freq(ix..iz).
struct Grid {
  int n = 0;
  double box_length = two_pi;

  Grid() = default;
  Grid(int n_per_axis, double length = two_pi)
      : n(n_per_axis), box_length(length) {
    if (n < 8 || n % 2 != 0)
      throw std::invalid_argument("Grid: n must be even and >= 8");
    if (!(box_length > 0.0))
      throw std::invalid_argument("Grid: box_length must be positive");
  }

  std::size_t size() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  double spacing() const { return box_length / n; }
  double cell_volume() const {
    const double h = spacing();
    return h * h * h;
  }
  double volume() const { return box_length * box_length * box_length; }
  /// Physical wavenumber per unit integer frequency (1 on the 2*pi box).
  double wave_unit() const { return two_pi / box_length; }

  /// Integer frequency of axis index: 0,1,...,n/2,-(n/2-1),...,-1.
  int freq(int idx) const { return idx <= n / 2 ? idx : idx - n; }
  /// Axis index holding integer frequency f (f in [-n/2, n/2]).
  int index_of_freq(int f) const { return f >= 0 ? f : f + n; }

  std::size_t flat(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * n + iy) * n + iz;
  }
  std::array<int, 3> unflat(std::size_t f) const {
    const int iz = static_cast<int>(f % n);
    const int iy = static_cast<int>((f / n) % n);
    const int ix = static_cast<int>(f / (static_cast<std::size_t>(n) * n));
    return {ix, iy, iz};
  }

  bool operator==(const Grid&) const = default;
};

/// Visit every mode with its physical wavevector components.
template <typename Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
  const double wu = g.wave_unit();
  std::size_t flat = 0;
  for (int ix = 0; ix < g.n; ++ix) {
    const double kx = wu * g.freq(ix);
    for (int iy = 0; iy < g.n; ++iy) {
      const double ky = wu * g.freq(iy);
      for (int iz = 0; iz < g.n; ++iz, ++flat) {
        const double kz = wu * g.freq(iz);
        fn(flat, kx, ky, kz);
      }
    }
  }
}

}  // namespace ptt
