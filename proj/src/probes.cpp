#include "ptt/probes.hpp"

#include <algorithm>
#include <cmath>

#include "ptt/fft.hpp"
#include "ptt/operators.hpp"
#include "ptt/random_fields.hpp"

namespace ptt {

namespace {

std::vector<double> pointwise_product(std::span<const double> a,
                                      std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

double quadrature_l2(const Grid& g, std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(g.cell_volume() * acc);
}

// u.grad f with products dealiased, physical velocity samples supplied.
SpectralScalarField advect_with(const PhysicalVector& u_phys,
                                const SpectralScalarField& f) {
  const Grid& g = f.grid();
  const auto grad = gradient(f);
  std::vector<double> acc(g.size(), 0.0);
  for (int i = 0; i < 3; ++i) {
    const auto gp = to_physical(grad[i]);
    for (std::size_t x = 0; x < acc.size(); ++x)
      acc[x] += u_phys.comp[i][x] * gp[x];
  }
  auto out = to_spectral(g, acc);
  dealias(out);
  return out;
}

InequalityStats finalize(std::string name, std::vector<double> ratios,
                         int skipped) {
  InequalityStats st;
  st.name = std::move(name);
  st.skipped = skipped;
  if (ratios.empty()) return st;
  std::sort(ratios.begin(), ratios.end());
  st.min = ratios.front();
  st.max = ratios.back();
  st.median = ratios[ratios.size() / 2];
  return st;
}

bool stats_pass(const std::vector<InequalityStats>& stats, double ceiling) {
  for (const auto& st : stats) {
    if (!std::isfinite(st.max) || st.max > ceiling) return false;
  }
  return true;
}

std::vector<double> jacobian_shell_norms(const DyadicBank& bank,
                                         const SpectralVectorField& u, int p) {
  std::vector<SpectralScalarField> comps;
  comps.reserve(9);
  for (int i = 0; i < 3; ++i) {
    auto gi = gradient(u[i]);
    for (int j = 0; j < 3; ++j) comps.push_back(std::move(gi[j]));
  }
  const std::vector<double> weights(9, 1.0);
  return shell_lp_norms_components(bank, comps, weights, p);
}

}  // namespace

BonyPieces bony_pieces(const DyadicBank& bank, const SpectralScalarField& u,
                       const SpectralScalarField& v) {
  const Grid& g = bank.grid();
  const int jlo = bank.j_min(), jhi = bank.j_max();
  const int nshell = bank.shell_count();

  std::vector<std::vector<double>> bu(nshell), bv(nshell);
  for (int j = jlo; j <= jhi; ++j) {
    bu[j - jlo] = to_physical(dyadic_block(bank, u, j));
    bv[j - jlo] = to_physical(dyadic_block(bank, v, j));
  }

  std::vector<double> tu(g.size(), 0.0), tv(g.size(), 0.0), rr(g.size(), 0.0);
  for (int j = jlo; j <= jhi; ++j) {
    const auto su = to_physical(lowpass(bank, u, j - 1));
    const auto sv = to_physical(lowpass(bank, v, j - 1));
    const auto& vj = bv[j - jlo];
    const auto& uj = bu[j - jlo];
    for (std::size_t x = 0; x < tu.size(); ++x) {
      tu[x] += su[x] * vj[x];
      tv[x] += sv[x] * uj[x];
    }
    for (int k = j - 1; k <= j + 1; ++k) {
      if (k < jlo || k > jhi) continue;
      const auto& uk = bu[k - jlo];
      for (std::size_t x = 0; x < rr.size(); ++x) rr[x] += uk[x] * vj[x];
    }
  }

  BonyPieces out;
  out.paraproduct_uv = to_spectral(g, tu);
  out.remainder = to_spectral(g, rr);
  out.paraproduct_vu = to_spectral(g, tv);
  return out;
}

double bony_reconstruct(const DyadicBank& bank, const SpectralScalarField& u,
                        const SpectralScalarField& v) {
  const Grid& g = bank.grid();
  const auto up = to_physical(u);
  const auto vp = to_physical(v);
  const auto uv = pointwise_product(up, vp);

  const int jlo = bank.j_min(), jhi = bank.j_max();
  std::vector<double> sum(g.size(), 0.0);
  std::vector<std::vector<double>> bu(bank.shell_count()),
      bv(bank.shell_count());
  for (int j = jlo; j <= jhi; ++j) {
    bu[j - jlo] = to_physical(dyadic_block(bank, u, j));
    bv[j - jlo] = to_physical(dyadic_block(bank, v, j));
  }
  for (int j = jlo; j <= jhi; ++j) {
    const auto su = to_physical(lowpass(bank, u, j - 1));
    const auto sv = to_physical(lowpass(bank, v, j - 1));
    const auto& vj = bv[j - jlo];
    const auto& uj = bu[j - jlo];
    for (std::size_t x = 0; x < sum.size(); ++x)
      sum[x] += su[x] * vj[x] + sv[x] * uj[x];
    for (int k = j - 1; k <= j + 1; ++k) {
      if (k < jlo || k > jhi) continue;
      const auto& uk = bu[k - jlo];
      for (std::size_t x = 0; x < sum.size(); ++x) sum[x] += uk[x] * vj[x];
    }
  }

  std::vector<double> diff(g.size());
  for (std::size_t x = 0; x < diff.size(); ++x) diff[x] = uv[x] - sum[x];
  const double denom = std::max(quadrature_l2(g, uv), 1e-300);
  return quadrature_l2(g, diff) / denom;
}

ProbeReport commutator_probe(const DyadicBank& bank, std::uint64_t seed,
                             int count, int p, double ceiling) {
  const Grid& g = bank.grid();
  const double sp = 3.0 / p;
  GaussianSampler gauss(seed);
  const double kmax = bank.generator_kmax();

  std::vector<double> r1, r2, r3, r4;
  int skip1 = 0, skip2 = 0, skip3 = 0, skip4 = 0;
  auto push_ratio = [](std::vector<double>& dst, int& skip, double lhs,
                       double rhs) {
    if (rhs <= 0.0) {
      ++skip;
      return;
    }
    dst.push_back(lhs / rhs);
  };

  for (int s = 0; s < count; ++s) {
    const auto u = random_solenoidal_field(g, gauss, kmax);
    const auto v = random_scalar_field(g, gauss, kmax);
    const auto w = random_scalar_field(g, gauss, kmax);
    const auto u_phys = to_physical(u);

    const auto adv_v = advect_with(u_phys, v);
    const auto adv_w = advect_with(u_phys, w);

    double lhs1 = 0.0, lhs2 = 0.0, lhs3 = 0.0, lhs4 = 0.0;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
      const auto comm_v =
          advect_with(u_phys, dyadic_block(bank, v, j)) -
          dyadic_block(bank, adv_v, j);
      const auto comm_w =
          advect_with(u_phys, dyadic_block(bank, w, j)) -
          dyadic_block(bank, adv_w, j);
      if (j <= bank.cutoff()) {
        lhs1 += std::exp2(0.5 * j) * lp_norm(comm_v, 2);
        lhs3 += std::exp2(1.5 * j) * lp_norm(comm_w, 2);
      } else {
        lhs2 += std::exp2((sp - 1.0) * j) * lp_norm(comm_v, p);
        lhs4 += std::exp2(sp * j) * lp_norm(comm_w, p);
      }
    }

    const auto grad_u_shells = jacobian_shell_norms(bank, u, p);
    const auto grad_u_shells_2 = jacobian_shell_norms(bank, u, 2);
    const double gu_all =
        besov_from_shell_norms(bank, grad_u_shells, {sp, p, 1},
                               ShellRange::all);
    const double gu_low = besov_from_shell_norms(bank, grad_u_shells_2,
                                                 {1.5, 2, 1}, ShellRange::low);
    const double gu_high = besov_from_shell_norms(bank, grad_u_shells,
                                                  {sp, p, 1}, ShellRange::high);

    const double v_low = besov_norm(bank, v, {0.5, 2, 1}, ShellRange::low);
    const double v_high =
        besov_norm(bank, v, {sp - 1.0, p, 1}, ShellRange::high);
    const double v_all = besov_norm(bank, v, {sp - 1.0, p, 1}, ShellRange::all);
    const double w_low = besov_norm(bank, w, {1.5, 2, 1}, ShellRange::low);
    const double w_high = besov_norm(bank, w, {sp, p, 1}, ShellRange::high);
    const double w_all = besov_norm(bank, w, {sp, p, 1}, ShellRange::all);

    push_ratio(r1, skip1, lhs1, v_low * gu_all + v_all * gu_low);
    push_ratio(r2, skip2, lhs2, v_high * gu_all + v_all * gu_high);
    push_ratio(r3, skip3, lhs3, w_low * gu_all + w_all * gu_low);
    push_ratio(r4, skip4, lhs4, w_high * gu_all + w_all * gu_high);
  }

  ProbeReport rep;
  rep.estimate_id = "commutator";
  rep.seed = seed;
  rep.sample_count = count;
  rep.p = p;
  rep.grid_n = g.n;
  rep.ceiling = ceiling;
  rep.inequalities.push_back(finalize("low_scalar", std::move(r1), skip1));
  rep.inequalities.push_back(finalize("high_scalar", std::move(r2), skip2));
  rep.inequalities.push_back(finalize("low_trace", std::move(r3), skip3));
  rep.inequalities.push_back(finalize("high_trace", std::move(r4), skip4));
  rep.pass = stats_pass(rep.inequalities, ceiling);
  return rep;
}

ProbeReport product_probe(const DyadicBank& bank, std::uint64_t seed,
                          int count, int p, double ceiling) {
  const Grid& g = bank.grid();
  const double sp = 3.0 / p;
  GaussianSampler gauss(seed);
  const double kmax = bank.generator_kmax();

  std::vector<double> r1, r2, r3, r4;
  int skip1 = 0, skip2 = 0, skip3 = 0, skip4 = 0;
  auto push_ratio = [](std::vector<double>& dst, int& skip, double lhs,
                       double rhs) {
    if (rhs <= 0.0) {
      ++skip;
      return;
    }
    dst.push_back(lhs / rhs);
  };

  for (int s = 0; s < count; ++s) {
    const auto u = random_scalar_field(g, gauss, kmax);
    const auto v = random_scalar_field(g, gauss, kmax);
    const auto w = random_scalar_field(g, gauss, kmax);

    const auto up = to_physical(u);
    auto vu = to_spectral(g, pointwise_product(to_physical(v), up));
    auto wu = to_spectral(g, pointwise_product(to_physical(w), up));
    dealias(vu);
    dealias(wu);

    const double vu_low = besov_norm(bank, vu, {0.5, 2, 1}, ShellRange::low);
    const double vu_high =
        besov_norm(bank, vu, {sp - 1.0, p, 1}, ShellRange::high);
    const double wu_low = besov_norm(bank, wu, {1.5, 2, 1}, ShellRange::low);
    const double wu_high = besov_norm(bank, wu, {sp, p, 1}, ShellRange::high);

    const double v_low = besov_norm(bank, v, {0.5, 2, 1}, ShellRange::low);
    const double v_high =
        besov_norm(bank, v, {sp - 1.0, p, 1}, ShellRange::high);
    const double u_all = besov_norm(bank, u, {sp, p, 1}, ShellRange::all);
    const double w_low = besov_norm(bank, w, {1.5, 2, 1}, ShellRange::low);
    const double w_high = besov_norm(bank, w, {sp, p, 1}, ShellRange::high);
    const double w_all = besov_norm(bank, w, {sp, p, 1}, ShellRange::all);
    const double u_low2 = besov_norm(bank, u, {1.5, 2, 1}, ShellRange::low);
    const double u_high2 = besov_norm(bank, u, {sp, p, 1}, ShellRange::high);

    push_ratio(r1, skip1, vu_low, (v_low + v_high) * u_all);
    push_ratio(r2, skip2, vu_high, (v_low + v_high) * u_all);
    push_ratio(r3, skip3, wu_low, (w_low + w_high) * (u_low2 + u_high2));
    push_ratio(r4, skip4, wu_high, w_all * u_all);
  }

  ProbeReport rep;
  rep.estimate_id = "product";
  rep.seed = seed;
  rep.sample_count = count;
  rep.p = p;
  rep.grid_n = g.n;
  rep.ceiling = ceiling;
  rep.inequalities.push_back(finalize("low_light", std::move(r1), skip1));
  rep.inequalities.push_back(finalize("high_light", std::move(r2), skip2));
  rep.inequalities.push_back(finalize("low_heavy", std::move(r3), skip3));
  rep.inequalities.push_back(finalize("high_heavy", std::move(r4), skip4));
  rep.pass = stats_pass(rep.inequalities, ceiling);
  return rep;
}

}  // namespace ptt
