#include "ptt/model.hpp"

#include <cmath>
#include <stdexcept>

#include "ptt/fft.hpp"

namespace ptt {

namespace {

// Jacobian convention J[i][j] = d_j u_i.
struct PhysicalJacobian {
  std::array<std::array<std::vector<double>, 3>, 3> d;
};

PhysicalJacobian jacobian_physical(const SpectralVectorField& u) {
  PhysicalJacobian jac;
  for (int i = 0; i < 3; ++i) {
    const auto gi = gradient(u[i]);
    for (int j = 0; j < 3; ++j) jac.d[i][j] = to_physical(gi[j]);
  }
  return jac;
}

std::array<std::vector<double>, 6> tensor_gradient_dot(
    const PhysicalVector& u_phys, const SpectralTensorField& s) {
  // (u . grad s)_c pointwise for each stored component.
  std::array<std::vector<double>, 6> out;
  for (int c = 0; c < SpectralTensorField::n_comp; ++c) {
    const auto gs = gradient(s.comp[c]);
    std::array<std::vector<double>, 3> gp;
    for (int j = 0; j < 3; ++j) gp[j] = to_physical(gs[j]);
    auto& o = out[c];
    o.assign(gp[0].size(), 0.0);
    for (std::size_t i = 0; i < o.size(); ++i)
      o[i] = u_phys.comp[0][i] * gp[0][i] + u_phys.comp[1][i] * gp[1][i] +
             u_phys.comp[2][i] * gp[2][i];
  }
  return out;
}

std::array<std::vector<double>, 3> vector_gradient_dot(
    const PhysicalVector& u_phys, const PhysicalJacobian& jac) {
  std::array<std::vector<double>, 3> out;
  for (int i = 0; i < 3; ++i) {
    auto& o = out[i];
    o.assign(u_phys.comp[0].size(), 0.0);
    for (std::size_t x = 0; x < o.size(); ++x)
      o[x] = u_phys.comp[0][x] * jac.d[i][0][x] +
             u_phys.comp[1][x] * jac.d[i][1][x] +
             u_phys.comp[2][x] * jac.d[i][2][x];
  }
  return out;
}

// Pointwise Q = s W - W s + lambda (D s + s D) from Jacobian samples.
void accumulate_q_pointwise(const PhysicalJacobian& jac,
                            const PhysicalTensor& s_phys, double lambda,
                            double sign,
                            std::array<std::vector<double>, 6>& acc) {
  const std::size_t npts = s_phys.comp[0].size();
  for (std::size_t x = 0; x < npts; ++x) {
    double S[3][3], W[3][3], D[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        S[i][j] = s_phys.comp[SpectralTensorField::index(i, j)][x];
        const double jij = jac.d[i][j][x];
        const double jji = jac.d[j][i][x];
        W[i][j] = 0.5 * (jij - jji);
        D[i][j] = 0.5 * (jij + jji);
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        double q = 0.0;
        for (int m = 0; m < 3; ++m) {
          q += S[i][m] * W[m][j] - W[i][m] * S[m][j];
          if (lambda != 0.0)
            q += lambda * (D[i][m] * S[m][j] + S[i][m] * D[m][j]);
        }
        acc[SpectralTensorField::index(i, j)][x] += sign * q;
      }
    }
  }
}

SpectralTensorField forward_tensor(const Grid& g,
                                   const std::array<std::vector<double>, 6>& v,
                                   bool do_dealias) {
  SpectralTensorField out(g);
  for (int c = 0; c < SpectralTensorField::n_comp; ++c)
    out.comp[c] = to_spectral(g, v[c]);
  if (do_dealias) dealias(out);
  return out;
}

}  // namespace

void ModelParams::validate() const {
  if (!(mu > 0.0) || !(mu1 > 0.0) || !(mu2 > 0.0))
    throw std::invalid_argument("ModelParams: mu, mu1, mu2 must be positive");
  if (b < 0.0) throw std::invalid_argument("ModelParams: b must be >= 0");
  if (lambda < -1.0 || lambda > 1.0)
    throw std::invalid_argument("ModelParams: lambda must lie in [-1, 1]");
  if (!(c0 > 0.0) || !std::isfinite(c0))
    throw std::invalid_argument("ModelParams: c0 must be finite and positive");
}

SpectralTensorField sym_grad(const SpectralVectorField& u) {
  const Grid& g = u.grid();
  SpectralTensorField out(g);
  std::array<SpectralVectorField, 3> grads = {gradient(u[0]), gradient(u[1]),
                                              gradient(u[2])};
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      auto& dst = out(i, j);
      const auto a = grads[i][j].coeffs();  // d_j u_i
      const auto b = grads[j][i].coeffs();  // d_i u_j
      auto o = dst.coeffs();
      for (std::size_t m = 0; m < o.size(); ++m) o[m] = 0.5 * (a[m] + b[m]);
    }
  }
  return out;
}

SkewTensorField skew_grad(const SpectralVectorField& u) {
  const Grid& g = u.grid();
  SkewTensorField out(g);
  std::array<SpectralVectorField, 3> grads = {gradient(u[0]), gradient(u[1]),
                                              gradient(u[2])};
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int c = 0; c < 3; ++c) {
    const int i = pairs[c][0], j = pairs[c][1];
    const auto a = grads[i][j].coeffs();
    const auto b = grads[j][i].coeffs();
    auto o = out.comp[c].coeffs();
    for (std::size_t m = 0; m < o.size(); ++m) o[m] = 0.5 * (a[m] - b[m]);
  }
  return out;
}

SpectralTensorField q_bilinear(const SpectralTensorField& tau,
                               const SpectralVectorField& u, double lambda) {
  const Grid& g = tau.grid();
  const auto jac = jacobian_physical(u);
  const auto tau_phys = to_physical(tau);
  std::array<std::vector<double>, 6> acc;
  for (auto& a : acc) a.assign(g.size(), 0.0);
  accumulate_q_pointwise(jac, tau_phys, lambda, 1.0, acc);
  return forward_tensor(g, acc, true);
}

SpectralTensorField special_solution(const Grid& g, double t, double c0) {
  if (t < 0.0 || !(c0 > 0.0))
    throw std::invalid_argument("special_solution: need t >= 0 and c0 > 0");
  SpectralTensorField out(g);
  const double v = (1.0 / 3.0) / (1.0 / c0 + t);
  out.comp[0][0] = v;
  out.comp[3][0] = v;
  out.comp[5][0] = v;
  return out;
}

SpectralTensorField special_solution_rate(const Grid& g, double t, double c0) {
  SpectralTensorField out(g);
  const double base = 1.0 / (1.0 / c0 + t);
  const double v = -(1.0 / 3.0) * base * base;
  out.comp[0][0] = v;
  out.comp[3][0] = v;
  out.comp[5][0] = v;
  return out;
}

namespace {

Rhs assemble_explicit(const SpectralVectorField& u,
                      const SpectralTensorField& sigma,
                      const ModelParams& params, double quad_relax,
                      bool do_dealias) {
  // Shared explicit work for the perturbation and original systems:
  //   du = P(mu1 div s - u.grad u)
  //   ds = -u.grad s - quad_relax (tr s) s - Q(s, grad u) + mu2 D(u)
  const Grid& g = u.grid();
  const auto u_phys = to_physical(u);
  const auto jac = jacobian_physical(u);
  const auto s_phys = to_physical(sigma);
  const auto adv_u = vector_gradient_dot(u_phys, jac);
  auto s_nl = tensor_gradient_dot(u_phys, sigma);  // u.grad s

  const std::size_t npts = g.size();
  std::vector<double> tr(npts);
  for (std::size_t x = 0; x < npts; ++x)
    tr[x] = s_phys.comp[0][x] + s_phys.comp[3][x] + s_phys.comp[5][x];

  for (int c = 0; c < SpectralTensorField::n_comp; ++c) {
    auto& dst = s_nl[c];
    const auto& sc = s_phys.comp[c];
    for (std::size_t x = 0; x < npts; ++x)
      dst[x] = -dst[x] - quad_relax * tr[x] * sc[x];
  }
  accumulate_q_pointwise(jac, s_phys, params.lambda, -1.0, s_nl);

  Rhs rhs;
  rhs.dsigma = forward_tensor(g, s_nl, do_dealias);
  {
    const auto d = sym_grad(u);
    for (int c = 0; c < SpectralTensorField::n_comp; ++c) {
      auto o = rhs.dsigma.comp[c].coeffs();
      const auto dc = d.comp[c].coeffs();
      for (std::size_t m = 0; m < o.size(); ++m) o[m] += params.mu2 * dc[m];
    }
  }

  SpectralVectorField force(g);
  for (int i = 0; i < 3; ++i) force[i] = to_spectral(g, adv_u[i]);
  if (do_dealias) dealias(force);
  const auto div_s = divergence(sigma);
  for (int i = 0; i < 3; ++i) {
    auto o = force[i].coeffs();
    const auto ds = div_s[i].coeffs();
    for (std::size_t m = 0; m < o.size(); ++m)
      o[m] = params.mu1 * ds[m] - o[m];
  }
  rhs.du = leray_project(force);
  return rhs;
}

void add_isotropic_damping(SpectralTensorField& dsigma,
                           const SpectralTensorField& sigma, double rate,
                           double trace_extra) {
  // dsigma -= rate * sigma + trace_extra * tr(sigma) I
  const auto tr = sigma.trace();
  for (int c = 0; c < SpectralTensorField::n_comp; ++c) {
    auto o = dsigma.comp[c].coeffs();
    const auto sc = sigma.comp[c].coeffs();
    for (std::size_t m = 0; m < o.size(); ++m) o[m] -= rate * sc[m];
    if (SpectralTensorField::is_diagonal(c)) {
      const auto trc = tr.coeffs();
      for (std::size_t m = 0; m < o.size(); ++m) o[m] -= trace_extra * trc[m];
    }
  }
}

}  // namespace

Rhs rhs_explicit(const SimState& state, const ModelParams& params,
                 bool do_dealias) {
  if (!params.paper_regime())
    throw std::invalid_argument(
        "rhs_explicit: perturbation form requires the studied regime");
  return assemble_explicit(state.u, state.sigma, params, 1.0, do_dealias);
}

Rhs rhs_perturbation(const SimState& state, const ModelParams& params,
                     bool do_dealias) {
  Rhs rhs = rhs_explicit(state, params, do_dealias);
  const double rate = params.base_trace(state.t);
  add_isotropic_damping(rhs.dsigma, state.sigma, rate, rate / 3.0);
  const auto lap = laplacian(state.u);
  for (int i = 0; i < 3; ++i) {
    auto o = rhs.du[i].coeffs();
    const auto l = lap[i].coeffs();
    for (std::size_t m = 0; m < o.size(); ++m) o[m] += params.mu * l[m];
  }
  return rhs;
}

Rhs rhs_original(const SpectralVectorField& u, const SpectralTensorField& tau,
                 double t, const ModelParams& params) {
  (void)t;
  Rhs rhs = assemble_explicit(u, tau, params, params.b, true);
  add_isotropic_damping(rhs.dsigma, tau, params.a, 0.0);
  const auto lap = laplacian(u);
  for (int i = 0; i < 3; ++i) {
    auto o = rhs.du[i].coeffs();
    const auto l = lap[i].coeffs();
    for (std::size_t m = 0; m < o.size(); ++m) o[m] += params.mu * l[m];
  }
  return rhs;
}

SpectralScalarField trace_field(const SpectralTensorField& sigma) {
  return sigma.trace();
}

double trace_rhs_residual(const SimState& state, const ModelParams& params) {
  const Grid& g = state.grid();
  const auto rhs = rhs_perturbation(state, params);
  auto lhs = rhs.dsigma.trace();

  // Independent assembly of the closed trace dynamics.
  const auto tr = state.sigma.trace();
  const auto u_phys = to_physical(state.u);
  const auto gtr = gradient(tr);
  std::array<std::vector<double>, 3> gtr_phys = {
      to_physical(gtr[0]), to_physical(gtr[1]), to_physical(gtr[2])};
  const auto tr_phys = to_physical(tr);
  std::vector<double> nl(g.size());
  for (std::size_t x = 0; x < nl.size(); ++x)
    nl[x] = -(u_phys.comp[0][x] * gtr_phys[0][x] +
              u_phys.comp[1][x] * gtr_phys[1][x] +
              u_phys.comp[2][x] * gtr_phys[2][x]) -
            tr_phys[x] * tr_phys[x];
  auto expected = to_spectral(g, nl);
  dealias(expected);
  const double rate = 2.0 * params.base_trace(state.t);
  {
    auto o = expected.coeffs();
    const auto trc = tr.coeffs();
    for (std::size_t m = 0; m < o.size(); ++m) o[m] -= rate * trc[m];
  }
  lhs -= expected;
  return l2_norm(lhs);
}

}  // namespace ptt
