#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ptt/diagnostics.hpp"
#include "ptt/fft.hpp"
#include "ptt/integrator.hpp"
#include "ptt/operators.hpp"
#include "ptt/probes.hpp"
#include "ptt/random_fields.hpp"
#include "ptt/runner.hpp"

namespace ptt {

namespace {

using nlohmann::json;

constexpr std::uint64_t kProbeSeed = 20240801ull;
constexpr int kProbeCount = 100;
constexpr int kProbeGridN = 32;
constexpr int kProbeCutoff = 2;

void add(std::vector<CheckResult>& out, std::string name, double value,
         double bound, bool pass_when_below = true) {
  const bool pass = pass_when_below ? value <= bound : value >= bound;
  out.push_back({std::move(name), pass && std::isfinite(value), value, bound});
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

std::vector<CheckResult> verify_operators() {
  std::vector<CheckResult> out;
  const Grid g(32);
  GaussianSampler gauss(101);

  {
    // transform round trip on raw grid data
    std::vector<double> values(g.size());
    for (auto& v : values) v = gauss();
    const auto f = to_spectral(g, values);
    const auto back = to_physical(f);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      worst = std::max(worst, std::abs(values[i] - back[i]));
      scale = std::max(scale, std::abs(values[i]));
    }
    add(out, "fft_round_trip", worst / scale, 1e-12);
  }

  const auto v = random_vector_field(g, gauss, 10.0);
  const auto pv = leray_project(v);
  {
    const auto ppv = leray_project(pv);
    double num = 0.0;
    for (int i = 0; i < 3; ++i) num += inner(ppv[i] - pv[i], ppv[i] - pv[i]);
    add(out, "leray_idempotent", std::sqrt(num) / l2_norm(pv), 1e-12);
  }
  {
    const auto w = random_vector_field(g, gauss, 10.0);
    const double lhs = inner(pv, w);
    const double rhs = inner(v, leray_project(w));
    add(out, "leray_self_adjoint", rel_diff(lhs, rhs), 1e-12);
  }
  {
    SpectralVectorField residual = v;
    residual -= pv;
    const double total = inner(v, v);
    const double split = inner(pv, pv) + inner(residual, residual);
    add(out, "leray_parseval_split", rel_diff(total, split), 1e-12);
  }
  add(out, "projection_solenoidal", divergence_defect(pv), 1e-12);

  {
    const auto f = random_scalar_field(g, gauss, 10.0);
    const auto round = fractional_lambda(fractional_lambda(f, 1.0), -1.0);
    SpectralScalarField expect = f;
    expect.set_mean(0.0);
    const auto diff = round - expect;
    add(out, "lambda_inverse_pair", l2_norm(diff) / l2_norm(expect), 1e-12);
  }
  {
    const DyadicBank bank(g, 2);
    const auto f = random_scalar_field(g, gauss, bank.generator_kmax());
    const auto a = fractional_lambda(dyadic_block(bank, f, 1), 0.7);
    const auto b = dyadic_block(bank, fractional_lambda(f, 0.7), 1);
    add(out, "lambda_commutes_blocks",
        l2_norm(a - b) / std::max(l2_norm(a), 1e-300), 1e-12);
  }
  return out;
}

std::vector<CheckResult> verify_lp() {
  std::vector<CheckResult> out;
  const Grid g(32);
  const DyadicBank bank(g, 2);
  GaussianSampler gauss(202);

  {
    // partition of unity over covered modes
    double worst = 0.0;
    const double kmax = bank.covered_kmax();
    for_each_mode(g, [&](std::size_t i, double kx, double ky, double kz) {
      const double k = std::sqrt(kx * kx + ky * ky + kz * kz);
      if (k == 0.0 || k > kmax) return;
      double sum = 0.0;
      for (int j = bank.j_min(); j <= bank.j_max(); ++j)
        sum += bank.shell_multiplier(j)[i];
      worst = std::max(worst, std::abs(sum - 1.0));
    });
    add(out, "partition_of_unity", worst, 1e-10);
  }
  {
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = random_scalar_field(g, gauss, bank.covered_kmax());
      SpectralScalarField sum(g);
      for (int j = bank.j_min(); j <= bank.j_max(); ++j)
        sum += dyadic_block(bank, f, j);
      SpectralScalarField expect = f;
      expect.set_mean(0.0);
      worst = std::max(worst, l2_norm(sum - expect) / l2_norm(expect));
    }
    add(out, "reconstruction", worst, 1e-10);
  }
  {
    // disjoint supports of shells at distance >= 2, checked on the samples
    double worst = 0.0;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
      for (int jp = j + 2; jp <= bank.j_max(); ++jp) {
        const auto a = bank.shell_multiplier(j);
        const auto b = bank.shell_multiplier(jp);
        for (std::size_t i = 0; i < a.size(); ++i)
          worst = std::max(worst, std::abs(a[i] * b[i]));
      }
    }
    add(out, "almost_orthogonality", worst, 0.0);
  }
  {
    const auto f = random_scalar_field(g, gauss, bank.generator_kmax());
    TildeNormTracker tracker(bank, 2);
    tracker.update(bank, f, 0.0);
    SpectralScalarField half = f;
    half *= 0.5;
    tracker.update(bank, half, 1.0);
    const BesovSpec spec{0.5, 2, 1};
    const double tilde = tracker.norm(bank, spec, ShellRange::all);
    const double snap = besov_norm(bank, half, spec, ShellRange::all);
    add(out, "tilde_dominates_snapshot", snap / tilde, 1.0);
  }
  {
    const auto f = random_scalar_field(g, gauss, bank.generator_kmax());
    const double l1 = besov_norm(bank, f, {0.5, 2, 1}, ShellRange::all);
    const double linf = besov_norm(bank, f, {0.5, 2, kInf}, ShellRange::all);
    add(out, "l1_dominates_linf", linf / l1, 1.0);
  }
  return out;
}

std::vector<CheckResult> verify_model() {
  std::vector<CheckResult> out;
  const Grid g(32);
  GaussianSampler gauss(303);
  ModelParams params;
  params.c0 = 1.0;

  double worst_trq = 0.0, worst_pairing = 0.0, worst_consistency = 0.0,
         worst_solenoidal = 0.0, worst_trace_res = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    SimState st(g);
    st.u = random_solenoidal_field(g, gauss, 8.0);
    st.u *= 1e-2;
    st.u.solenoidal = true;
    st.sigma = random_tensor_field(g, gauss, 8.0);
    st.sigma *= 1e-2;
    st.t = 0.3 * trial;

    const double scale = std::max(lp_norm(st.u, kInf), lp_norm(st.sigma, kInf));

    const auto q = q_bilinear(st.sigma, st.u, 0.0);
    worst_trq = std::max(worst_trq,
                         lp_norm(q.trace(), kInf) / (scale * scale));

    const double pairing = inner(leray_project(divergence(st.sigma)), st.u) +
                           inner(sym_grad(st.u), st.sigma);
    worst_pairing =
        std::max(worst_pairing, std::abs(pairing) / (scale * scale));

    const auto pert = rhs_perturbation(st, params);
    worst_solenoidal =
        std::max(worst_solenoidal, divergence_defect(pert.du));

    SpectralTensorField tau = st.sigma;
    tau += special_solution(g, st.t, params.c0);
    const auto orig = rhs_original(st.u, tau, st.t, params);
    const auto rate = special_solution_rate(g, st.t, params.c0);
    double num = 0.0;
    {
      SpectralTensorField diff = orig.dsigma;
      diff -= rate;
      diff -= pert.dsigma;
      SpectralVectorField dv = orig.du;
      dv -= pert.du;
      num = std::sqrt(inner(diff, diff) + inner(dv, dv));
    }
    worst_consistency = std::max(worst_consistency, num / scale);

    worst_trace_res =
        std::max(worst_trace_res, trace_rhs_residual(st, params) / scale);
  }
  add(out, "trace_q_vanishes", worst_trq, 1e-12);
  add(out, "coupling_energy_neutral", worst_pairing, 1e-10);
  add(out, "du_solenoidal", worst_solenoidal, 1e-12);
  add(out, "perturbation_original_consistency", worst_consistency, 1e-10);
  add(out, "trace_dynamics_residual", worst_trace_res, 1e-10);

  {
    double worst = 0.0;
    for (double t : {0.0, 0.5, 2.0}) {
      for (double c0 : {1.0, 3.0}) {
        const auto bar = special_solution(g, t, c0);
        const auto rate = special_solution_rate(g, t, c0);
        const double tr = 1.0 / (1.0 / c0 + t);
        SpectralTensorField residual = rate;
        SpectralTensorField scaled = bar;
        scaled *= tr;
        residual += scaled;
        worst = std::max(worst, max_coeff_magnitude(residual));
      }
    }
    add(out, "special_solution_exact", worst, 1e-14);
  }
  return out;
}

std::vector<CheckResult> verify_integrator() {
  std::vector<CheckResult> out;
  {
    const auto f = damping_factors(0.0, 1.0, 1.0);
    add(out, "damping_ratio", rel_diff(f.deviatoric, 0.5), 1e-15);
    add(out, "damping_trace_square",
        rel_diff(f.trace, f.deviatoric * f.deviatoric), 1e-15);
  }

  const Grid g(8);
  ModelParams params;
  params.c0 = 1.0;

  {
    // isotropic constant state sigma = y I: the diagonal entry obeys
    // y' = -2y/(1/c0+t) - 3y^2, solved in closed form via z = (1/c0+t)^2 y.
    auto closed_form = [&](double y0, double t) {
      const double z0 = y0 / (params.c0 * params.c0);
      const double base = 1.0 / params.c0 + t;
      const double inv =
          1.0 / z0 + 3.0 * (params.c0 - 1.0 / base);
      return 1.0 / (base * base * inv);
    };
    const double y0 = 0.2;
    const double t_end = 0.2;
    std::vector<double> errs;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      SimState st(g);
      for (int c : {0, 3, 5}) st.sigma.comp[c][0] = y0;
      StepperConfig cfg;
      cfg.dt = dt;
      while (st.t < t_end - 1e-12) {
        auto res = step(st, cfg, params);
        st = std::move(res.state);
      }
      const double y = st.sigma.comp[0][0].real();
      errs.push_back(std::abs(y - closed_form(y0, t_end)));
    }
    const double r1 = errs[0] / errs[1];
    const double r2 = errs[1] / errs[2];
    add(out, "isotropic_order_ratio", std::min(r1, r2), 3.5, false);
  }

  {
    // deviatoric single mode with P div sigma = 0: exact factor law
    SimState st(g);
    const std::array<int, 3> k = {1, 2, 0};
    const double k2 = 1.0 + 4.0;
    const double kk[3] = {1.0, 2.0, 0.0};
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        const double val = kk[i] * kk[j] - (i == j ? k2 / 3.0 : 0.0);
        const std::size_t idx =
            g.flat(g.index_of_freq(k[0]), g.index_of_freq(k[1]),
                   g.index_of_freq(k[2]));
        const std::size_t cidx =
            g.flat(g.index_of_freq(-k[0]), g.index_of_freq(-k[1]),
                   g.index_of_freq(-k[2]));
        st.sigma(i, j)[idx] = val;
        st.sigma(i, j)[cidx] = val;
      }
    }
    StepperConfig cfg;
    cfg.dt = 0.05;
    auto res = step(st, cfg, params);
    const auto f = damping_factors(0.0, cfg.dt, params.c0);
    SpectralTensorField expect = st.sigma;
    expect *= f.deviatoric;
    expect -= res.state.sigma;
    add(out, "deviatoric_exact_damping",
        max_coeff_magnitude(expect) / max_coeff_magnitude(st.sigma), 1e-10);
  }

  {
    // bit-identical reruns
    auto run_once = [&]() {
      GaussianSampler gauss(404);
      SimState st(g);
      st.u = random_solenoidal_field(g, gauss, 2.5);
      st.u *= 1e-3;
      st.sigma = random_tensor_field(g, gauss, 2.5);
      st.sigma *= 1e-3;
      StepperConfig cfg;
      cfg.dt = 5e-3;
      for (int i = 0; i < 20; ++i) {
        auto res = step(st, cfg, params);
        st = std::move(res.state);
      }
      return st;
    };
    const auto a = run_once();
    const auto b = run_once();
    double diff = 0.0;
    for (int i = 0; i < 3; ++i)
      for (std::size_t m = 0; m < a.u[i].coeffs().size(); ++m)
        diff = std::max(diff, std::abs(a.u[i][m] - b.u[i][m]));
    for (int c = 0; c < 6; ++c)
      for (std::size_t m = 0; m < a.sigma.comp[c].coeffs().size(); ++m)
        diff = std::max(diff, std::abs(a.sigma.comp[c][m] - b.sigma.comp[c][m]));
    add(out, "deterministic_trajectory", diff, 0.0);
  }
  return out;
}

namespace {

json probe_report_entries(const ProbeReport& rep) {
  json j;
  for (const auto& ineq : rep.inequalities) j[ineq.name] = ineq.max;
  return j;
}

}  // namespace

std::vector<CheckResult> verify_probes(const std::string& baselines_path,
                                       bool record_if_missing) {
  std::vector<CheckResult> out;
  const Grid g(kProbeGridN);
  const DyadicBank bank(g, kProbeCutoff);

  {
    GaussianSampler gauss(kProbeSeed);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const auto u = random_scalar_field(g, gauss, bank.generator_kmax());
      const auto v = random_scalar_field(g, gauss, bank.generator_kmax());
      worst = std::max(worst, bony_reconstruct(bank, u, v));
    }
    add(out, "bony_residual", worst, 1e-8);
  }

  json measured;
  measured["seed"] = kProbeSeed;
  measured["count"] = kProbeCount;
  measured["grid_n"] = kProbeGridN;
  measured["cutoff"] = kProbeCutoff;
  for (int p : {2, 3, 4}) {
    const auto crep = commutator_probe(bank, kProbeSeed, kProbeCount, p);
    const auto prep = product_probe(bank, kProbeSeed, kProbeCount, p);
    add(out, "commutator_finite_p" + std::to_string(p), crep.pass ? 0.0 : 1.0,
        0.0);
    add(out, "product_finite_p" + std::to_string(p), prep.pass ? 0.0 : 1.0,
        0.0);
    measured["commutator"]["p" + std::to_string(p)] =
        probe_report_entries(crep);
    measured["product"]["p" + std::to_string(p)] = probe_report_entries(prep);
  }

  namespace fs = std::filesystem;
  if (!fs::exists(baselines_path)) {
    if (record_if_missing) {
      fs::create_directories(fs::path(baselines_path).parent_path());
      std::ofstream f(baselines_path);
      f << measured.dump(2) << "\n";
      out.push_back({"baselines_recorded", true, 0.0, 0.0});
      return out;
    }
    out.push_back({"baselines_present", false, 0.0, 0.0});
    return out;
  }

  json baseline;
  {
    std::ifstream f(baselines_path);
    f >> baseline;
  }
  for (const std::string family : {"commutator", "product"}) {
    for (int p : {2, 3, 4}) {
      const std::string pk = "p" + std::to_string(p);
      if (!baseline.contains(family) || !baseline[family].contains(pk))
        continue;
      for (auto& [name, base] : baseline[family][pk].items()) {
        const double b = base.get<double>();
        const double m = measured[family][pk][name].get<double>();
        const double rel = b > 0.0 ? m / b : (m == 0.0 ? 1.0 : 1e9);
        const bool pass = rel >= 0.8 && rel <= 1.2;
        out.push_back(
            {family + "_" + pk + "_" + name + "_baseline", pass, rel, 1.2});
      }
    }
  }
  return out;
}

VerifySummary verify(const std::string& suite,
                     const std::string& baselines_path) {
  VerifySummary summary;
  summary.suite = suite;
  auto run_suite = [&](const std::string& name) {
    if (name == "operators") return verify_operators();
    if (name == "lp") return verify_lp();
    if (name == "model") return verify_model();
    if (name == "integrator") return verify_integrator();
    if (name == "probes") return verify_probes(baselines_path, true);
    throw ConfigError("unknown verify suite: " + name);
  };
  if (suite == "all") {
    for (const std::string name :
         {"operators", "lp", "model", "integrator", "probes"}) {
      auto checks = run_suite(name);
      for (auto& c : checks) c.name = name + "/" + c.name;
      summary.checks.insert(summary.checks.end(), checks.begin(), checks.end());
    }
  } else {
    summary.checks = run_suite(suite);
  }
  summary.pass = true;
  for (const auto& c : summary.checks) summary.pass = summary.pass && c.pass;
  return summary;
}

std::string verify_summary_json(const VerifySummary& summary) {
  json j;
  j["suite"] = summary.suite;
  j["pass"] = summary.pass;
  json checks = json::array();
  for (const auto& c : summary.checks)
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"value", c.value},
                      {"bound", c.bound}});
  j["checks"] = checks;
  return j.dump(2);
}

}  // namespace ptt
