#include "ptt/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ptt/fft.hpp"
#include "ptt/operators.hpp"
#include "ptt/random_fields.hpp"

namespace ptt {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "if_rk2") return Scheme::if_rk2;
  if (s == "if_rk4") return Scheme::if_rk4;
  throw ConfigError("unknown scheme: " + s);
}

std::string to_string(Scheme s) {
  return s == Scheme::if_rk2 ? "if_rk2" : "if_rk4";
}

SamplingMode sampling_from_string(const std::string& s) {
  if (s == "trilinear") return SamplingMode::trilinear;
  if (s == "spectral") return SamplingMode::spectral;
  throw ConfigError("unknown sampling mode: " + s);
}

std::string to_string(SamplingMode m) {
  return m == SamplingMode::trilinear ? "trilinear" : "spectral";
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::special_solution: return "special_solution";
    case Scenario::small_data: return "small_data";
    case Scenario::negative_trace_blowup: return "negative_trace_blowup";
    case Scenario::custom: return "custom";
  }
  return "custom";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "special_solution") return Scenario::special_solution;
  if (s == "small_data") return Scenario::small_data;
  if (s == "negative_trace_blowup") return Scenario::negative_trace_blowup;
  if (s == "custom") return Scenario::custom;
  throw ConfigError("unknown scenario: " + s);
}

void RunConfig::validate() const {
  try {
    Grid probe(n, box_length);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  if (p < 2 || p > 4) throw ConfigError("p must lie in [2, 4]");
  if (!(c0 > 0.0) || !std::isfinite(c0))
    throw ConfigError("c0 must be finite and positive");
  try {
    stepper.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (sample_every < 1) throw ConfigError("sample_every must be >= 1");
  if (!(blowup_threshold > 0.0))
    throw ConfigError("blowup_threshold must be positive");
  if (scenario == Scenario::negative_trace_blowup) {
    if (!(blowup_scenario.trace_min < 0.0))
      throw ConfigError("negative_trace_blowup requires trace_min < 0");
    if (blowup_scenario.flatness < 0.0 || blowup_scenario.flatness >= 1.0)
      throw ConfigError("flatness must lie in [0, 1)");
  }
  if (scenario == Scenario::small_data && !(initial.delta0 > 0.0))
    throw ConfigError("small_data requires delta0 > 0");
  for (const auto& m : initial.modes) {
    if (m.target != "u" && m.target != "sigma")
      throw ConfigError("mode target must be 'u' or 'sigma'");
    const std::size_t want = m.target == "u" ? 3 : 6;
    if (m.components.size() != want)
      throw ConfigError("mode component count mismatch");
  }
  if (initial.kind == InitialDataSpec::Kind::modes && initial.modes.empty() &&
      scenario != Scenario::special_solution)
    throw ConfigError("mode-list initial data with no modes");
}

RunConfig config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  RunConfig c;
  try {
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      c.n = g.value("n", c.n);
      c.box_length = g.value("box_length", c.box_length);
    }
    c.p = j.value("p", c.p);
    c.c0 = j.value("c0", c.c0);
    c.cutoff = j.value("cutoff", c.cutoff);
    if (j.contains("scenario"))
      c.scenario = scenario_from_string(j["scenario"].get<std::string>());
    if (j.contains("initial_data")) {
      const auto& i = j["initial_data"];
      const std::string kind = i.value("kind", std::string("random"));
      if (kind == "zero") c.initial.kind = InitialDataSpec::Kind::zero;
      else if (kind == "random") c.initial.kind = InitialDataSpec::Kind::random;
      else if (kind == "modes") c.initial.kind = InitialDataSpec::Kind::modes;
      else throw ConfigError("unknown initial data kind: " + kind);
      c.initial.seed = i.value("seed", c.initial.seed);
      c.initial.delta0 = i.value("delta0", c.initial.delta0);
      c.initial.u_amplitude = i.value("u_amplitude", c.initial.u_amplitude);
      if (i.contains("modes")) {
        for (const auto& m : i["modes"]) {
          ModeSpec ms;
          ms.target = m.at("target").get<std::string>();
          const auto& kv = m.at("k");
          for (int d = 0; d < 3; ++d) ms.k[d] = kv.at(d).get<int>();
          for (const auto& comp : m.at("components")) {
            ms.components.emplace_back(comp.at(0).get<double>(),
                                       comp.at(1).get<double>());
          }
          c.initial.modes.push_back(std::move(ms));
        }
      }
    }
    if (j.contains("blowup_scenario")) {
      const auto& b = j["blowup_scenario"];
      c.blowup_scenario.trace_min =
          b.value("trace_min", c.blowup_scenario.trace_min);
      c.blowup_scenario.flatness =
          b.value("flatness", c.blowup_scenario.flatness);
      if (b.contains("tracked_point")) {
        for (int d = 0; d < 3; ++d)
          c.blowup_scenario.tracked_point[d] =
              b["tracked_point"].at(d).get<double>();
      }
    }
    if (j.contains("time")) {
      const auto& t = j["time"];
      if (t.contains("scheme"))
        c.stepper.scheme = scheme_from_string(t["scheme"].get<std::string>());
      c.stepper.dt = t.value("dt", c.stepper.dt);
      c.stepper.dt_max = t.value("dt_max", c.stepper.dt_max);
      c.stepper.cfl_safety = t.value("cfl_safety", c.stepper.cfl_safety);
      c.stepper.dealias = t.value("dealias", c.stepper.dealias);
      c.t_end = t.value("t_end", c.t_end);
    }
    c.blowup_threshold = j.value("blowup_threshold", c.blowup_threshold);
    c.sample_every = j.value("sample_every", c.sample_every);
    if (j.contains("particles")) {
      const auto& p = j["particles"];
      c.particles.enabled = p.value("enabled", c.particles.enabled);
      if (p.contains("sampling"))
        c.particles.sampling =
            sampling_from_string(p["sampling"].get<std::string>());
      if (p.contains("points")) {
        for (const auto& pt : p["points"]) {
          Vec3 x;
          for (int d = 0; d < 3; ++d) x[d] = pt.at(d).get<double>();
          c.particles.points.push_back(x);
        }
      }
    }
    c.out_dir = j.value("output_dir", c.out_dir);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"n", c.n}, {"box_length", c.box_length}};
  j["p"] = c.p;
  j["c0"] = c.c0;
  j["cutoff"] = c.cutoff;
  j["scenario"] = to_string(c.scenario);
  json init;
  init["kind"] = c.initial.kind == InitialDataSpec::Kind::zero     ? "zero"
                 : c.initial.kind == InitialDataSpec::Kind::random ? "random"
                                                                   : "modes";
  init["seed"] = c.initial.seed;
  init["delta0"] = c.initial.delta0;
  init["u_amplitude"] = c.initial.u_amplitude;
  if (!c.initial.modes.empty()) {
    json modes = json::array();
    for (const auto& m : c.initial.modes) {
      json jm;
      jm["target"] = m.target;
      jm["k"] = {m.k[0], m.k[1], m.k[2]};
      json comps = json::array();
      for (const auto& cc : m.components)
        comps.push_back({cc.real(), cc.imag()});
      jm["components"] = comps;
      modes.push_back(jm);
    }
    init["modes"] = modes;
  }
  j["initial_data"] = init;
  j["blowup_scenario"] = {
      {"trace_min", c.blowup_scenario.trace_min},
      {"flatness", c.blowup_scenario.flatness},
      {"tracked_point",
       {c.blowup_scenario.tracked_point[0], c.blowup_scenario.tracked_point[1],
        c.blowup_scenario.tracked_point[2]}}};
  j["time"] = {{"scheme", to_string(c.stepper.scheme)},
               {"dt", c.stepper.dt},
               {"dt_max", c.stepper.dt_max},
               {"cfl_safety", c.stepper.cfl_safety},
               {"dealias", c.stepper.dealias},
               {"t_end", c.t_end}};
  j["blowup_threshold"] = c.blowup_threshold;
  j["sample_every"] = c.sample_every;
  json parts;
  parts["enabled"] = c.particles.enabled;
  parts["sampling"] = to_string(c.particles.sampling);
  json pts = json::array();
  for (const auto& x : c.particles.points) pts.push_back({x[0], x[1], x[2]});
  parts["points"] = pts;
  j["particles"] = parts;
  j["output_dir"] = c.out_dir;
  return j.dump(2);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

RunConfig default_config(Scenario scenario) {
  RunConfig c;
  c.scenario = scenario;
  switch (scenario) {
    case Scenario::special_solution:
      c.initial.kind = InitialDataSpec::Kind::zero;
      c.t_end = 1.0;
      c.stepper.dt_max = 0.01;
      break;
    case Scenario::small_data:
      c.initial.kind = InitialDataSpec::Kind::random;
      c.initial.seed = 7;
      c.initial.delta0 = 1e-3;
      c.t_end = 20.0;
      c.stepper.dt_max = 0.01;
      c.stepper.cfl_safety = 0.4;
      break;
    case Scenario::negative_trace_blowup:
      c.initial.kind = InitialDataSpec::Kind::random;
      c.initial.seed = 11;
      c.initial.u_amplitude = 1e-2;
      c.t_end = 2.0;
      c.stepper.scheme = Scheme::if_rk4;
      c.stepper.dt_max = 5e-3;
      c.stepper.cfl_safety = 0.3;
      c.particles.enabled = true;
      c.particles.sampling = SamplingMode::spectral;
      c.particles.points.push_back(c.blowup_scenario.tracked_point);
      break;
    case Scenario::custom:
      break;
  }
  return c;
}

namespace {

void add_mode(SpectralScalarField& f, const std::array<int, 3>& k, cplx amp) {
  const Grid& g = f.grid();
  const int half = g.n / 2;
  for (int d = 0; d < 3; ++d) {
    if (std::abs(k[d]) >= half)
      throw ConfigError("mode frequency beyond the representable band");
  }
  const std::size_t idx = g.flat(g.index_of_freq(k[0]), g.index_of_freq(k[1]),
                                 g.index_of_freq(k[2]));
  const std::size_t conj_idx = g.flat(
      g.index_of_freq(-k[0]), g.index_of_freq(-k[1]), g.index_of_freq(-k[2]));
  f[idx] += amp;
  if (conj_idx != idx) f[conj_idx] += std::conj(amp);
}

std::pair<SpectralVectorField, SpectralTensorField> build_from_spec(
    const RunConfig& config, const DyadicBank& bank) {
  const Grid g(config.n, config.box_length);
  SpectralVectorField u(g);
  SpectralTensorField sigma(g);
  switch (config.initial.kind) {
    case InitialDataSpec::Kind::zero:
      break;
    case InitialDataSpec::Kind::random: {
      GaussianSampler gauss(config.initial.seed);
      const double kmax = bank.generator_kmax();
      u = random_solenoidal_field(g, gauss, kmax);
      sigma = random_tensor_field(g, gauss, kmax);
      break;
    }
    case InitialDataSpec::Kind::modes: {
      for (const auto& m : config.initial.modes) {
        if (m.target == "u") {
          for (int i = 0; i < 3; ++i) add_mode(u[i], m.k, m.components[i]);
        } else {
          for (int i = 0; i < 6; ++i)
            add_mode(sigma.comp[i], m.k, m.components[i]);
        }
      }
      u = leray_project(u);
      break;
    }
  }
  return {std::move(u), std::move(sigma)};
}

}  // namespace

std::pair<SpectralVectorField, SpectralTensorField> build_initial_data(
    const RunConfig& config, const DyadicBank& bank) {
  const Grid g(config.n, config.box_length);
  switch (config.scenario) {
    case Scenario::special_solution:
      return {SpectralVectorField(g), SpectralTensorField(g)};
    case Scenario::small_data: {
      auto [u, sigma] = build_from_spec(config, bank);
      const double e = energy_e0(bank, u, sigma, config.p);
      if (e <= 0.0)
        throw ConfigError("small_data: initial data has zero energy");
      const double scale = config.initial.delta0 / e;
      u *= scale;
      sigma *= scale;
      u.solenoidal = true;
      return {std::move(u), std::move(sigma)};
    }
    case Scenario::negative_trace_blowup: {
      const auto& b = config.blowup_scenario;
      auto [u, sigma_unused] = build_from_spec(config, bank);
      (void)sigma_unused;
      if (config.initial.kind == InitialDataSpec::Kind::zero ||
          max_coeff_magnitude(u) == 0.0) {
        // fall back to one solenoidal mode so the trajectory is nontrivial
        GaussianSampler gauss(config.initial.seed);
        u = random_solenoidal_field(g, gauss, 2.5 * g.wave_unit());
      }
      const double umax = lp_norm(u, kInf);
      if (umax > 0.0) u *= config.initial.u_amplitude / umax;

      // tr tau_0 = m (w + (1-w)/3 sum_i cos(x_i - x0_i)), minimum m at x0
      SpectralScalarField tr_tau(g);
      tr_tau.set_mean(b.trace_min * b.flatness);
      const double amp = b.trace_min * (1.0 - b.flatness) / 3.0;
      for (int d = 0; d < 3; ++d) {
        std::array<int, 3> k{};
        k[d] = 1;
        const cplx coeff =
            0.5 * amp *
            std::polar(1.0, -g.wave_unit() * b.tracked_point[d]);
        add_mode(tr_tau, k, coeff);
      }
      SpectralTensorField sigma(g);
      // sigma_0 = (tr tau_0 - c0)/3 * I
      for (int c : {0, 3, 5}) {
        auto o = sigma.comp[c].coeffs();
        const auto trc = tr_tau.coeffs();
        for (std::size_t m = 0; m < o.size(); ++m) o[m] = trc[m] / 3.0;
        o[0] -= config.c0 / 3.0;
      }
      return {std::move(u), std::move(sigma)};
    }
    case Scenario::custom: {
      auto [u, sigma] = build_from_spec(config, bank);
      return {std::move(u), std::move(sigma)};
    }
  }
  throw ConfigError("unreachable scenario");
}

std::vector<std::string> history_columns() {
  return {"t",
          "tilde_u_low",
          "tilde_sigma_low",
          "int_u_low",
          "int_psi_low",
          "tilde_u_high",
          "tilde_sigma_high",
          "int_u_high",
          "int_psi_high",
          "int_trace_low",
          "int_trace_high",
          "sigma_linf",
          "trace_max"};
}

std::string history_row_csv(const SampleRow& row) {
  const EnergyBreakdown& r = row.running;
  std::string out = fmt_double(row.t);
  for (double v :
       {r.tilde_u_low, r.tilde_sigma_low, r.int_u_low, r.int_psi_low,
        r.tilde_u_high, r.tilde_sigma_high, r.int_u_high, r.int_psi_high,
        r.int_trace_low, r.int_trace_high, row.sigma_linf, row.trace_max}) {
    out += ',';
    out += fmt_double(v);
  }
  return out;
}

namespace {

struct ParticleTracker {
  ParticleSet set;
  SamplingMode mode;
};

double sample_trace_tau(const SpectralScalarField& tr_sigma,
                        std::span<const double> tr_phys, const Vec3& x,
                        SamplingMode mode, double base_trace) {
  return sample_scalar(tr_sigma, tr_phys, x, mode) + base_trace;
}

void evaluate_scenario_checks(const RunConfig& config, RunResult& result,
                              const std::vector<double>& u_linf,
                              const std::vector<double>& u_low_b12) {
  switch (config.scenario) {
    case Scenario::special_solution: {
      double worst = 0.0;
      for (std::size_t i = 0; i < result.history.size(); ++i)
        worst = std::max(worst, result.history[i].sigma_linf + u_linf[i]);
      result.checks.push_back(
          {"perturbation_stays_zero", worst <= 1e-10, worst, 1e-10});
      result.checks.push_back({"no_blowup", !result.blowup.has_value(),
                               result.blowup ? 1.0 : 0.0, 0.0});
      break;
    }
    case Scenario::small_data: {
      result.checks.push_back({"no_blowup", !result.blowup.has_value(),
                               result.blowup ? 1.0 : 0.0, 0.0});
      std::size_t ref = result.history.size();
      for (std::size_t i = 0; i < result.history.size(); ++i) {
        if (result.history[i].t >= 1.0) {
          ref = i;
          break;
        }
      }
      if (ref < result.history.size() && !result.history.empty()) {
        const double e_ref = result.history[ref].running.total();
        const double e_end = result.history.back().running.total();
        const double ratio = e_ref > 0.0 ? e_end / e_ref : 0.0;
        result.checks.push_back(
            {"bounded_energy", ratio <= 10.0, ratio, 10.0});
        const double u_ref = u_low_b12[ref];
        const double u_end = u_low_b12.back();
        const double uratio = u_ref > 0.0 ? u_end / u_ref : 0.0;
        result.checks.push_back(
            {"lowfreq_dissipation", u_end <= u_ref, uratio, 1.0});
      }
      break;
    }
    case Scenario::negative_trace_blowup: {
      const double t_exact = -1.0 / config.blowup_scenario.trace_min;
      const bool declared = result.blowup.has_value();
      result.checks.push_back(
          {"blowup_declared", declared, declared ? 1.0 : 0.0, 1.0});
      if (declared) {
        const double rel = result.blowup->t / t_exact;
        result.checks.push_back(
            {"blowup_time_window", rel >= 0.9 && rel <= 1.1, rel, 1.1});
      }
      // Riccati comparison up to 90% of the exact blow-up time.
      double worst = 0.0;
      for (const auto& s : result.particle_samples) {
        if (s.particle_id != 0 || s.t > 0.9 * t_exact) continue;
        const double exact = s.tr_tau_exact;
        if (std::abs(exact) < 1e-12) continue;
        worst = std::max(worst,
                         std::abs(s.tr_tau_sampled - exact) / std::abs(exact));
      }
      result.checks.push_back(
          {"riccati_tracking", worst <= 1e-3, worst, 1e-3});
      break;
    }
    case Scenario::custom:
      break;
  }
}

void persist_run(const RunConfig& config, const RunResult& result,
                 const SimState& final_state) {
  namespace fs = std::filesystem;
  const fs::path dir(config.out_dir);
  fs::create_directories(dir);

  {
    std::ofstream csv(dir / "history.csv");
    const auto cols = history_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
      csv << (i ? "," : "") << cols[i];
    csv << "\n";
    for (const auto& row : result.history) csv << history_row_csv(row) << "\n";
  }

  if (!result.particle_samples.empty()) {
    std::ofstream csv(dir / "particles.csv");
    csv << "t,particle_id,x,y,z,tr_tau_sampled,tr_tau_exact\n";
    for (const auto& s : result.particle_samples) {
      csv << fmt_double(s.t) << ',' << s.particle_id << ','
          << fmt_double(s.position[0]) << ',' << fmt_double(s.position[1])
          << ',' << fmt_double(s.position[2]) << ','
          << fmt_double(s.tr_tau_sampled) << ',' << fmt_double(s.tr_tau_exact)
          << "\n";
    }
  }

  {
    json manifest;
    manifest["code_version"] = "0.1.0";
    const auto now = std::chrono::system_clock::now();
    manifest["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            now.time_since_epoch())
            .count();
    manifest["config"] = json::parse(config_to_json(config));
    const Grid g(config.n, config.box_length);
    const DyadicBank bank(g, config.cutoff);
    manifest["grid"] = {{"n", config.n},
                        {"box_length", config.box_length},
                        {"j_min", bank.j_min()},
                        {"j_max", bank.j_max()},
                        {"cutoff", bank.cutoff()}};
    manifest["status"] = result.blowup ? "blowup" : "completed";
    if (result.blowup) {
      manifest["blowup"] = {{"t", result.blowup->t},
                            {"reason", result.blowup->reason},
                            {"max_trace", result.blowup->max_trace}};
    }
    manifest["e0"] = result.e0;
    manifest["final_time"] = result.final_time;
    const EnergyBreakdown& e = result.final_energy;
    manifest["final_energy"] = {
        {"low_sup", e.low_sup()},
        {"low_dissipation", e.low_dissipation()},
        {"high_mixed", e.high_mixed()},
        {"trace_integrals", e.trace_integrals()},
        {"total", e.total()}};
    manifest["max_embedding_ratio"] = result.max_embedding_ratio;
    json checks = json::array();
    for (const auto& c : result.checks)
      checks.push_back({{"name", c.name},
                        {"pass", c.pass},
                        {"value", c.value},
                        {"bound", c.bound}});
    manifest["checks"] = checks;
    std::ofstream mf(dir / "manifest.json");
    mf << manifest.dump(2) << "\n";
  }

  {
    std::ofstream bin(dir / "final_state.bin", std::ios::binary);
    const char magic[8] = {'P', 'T', 'T', 'S', 'T', 'A', 'T', 'E'};
    bin.write(magic, 8);
    const std::int32_t n = config.n;
    bin.write(reinterpret_cast<const char*>(&n), sizeof(n));
    const double meta[3] = {config.box_length, final_state.t, config.c0};
    bin.write(reinterpret_cast<const char*>(meta), sizeof(meta));
    auto dump = [&](const SpectralScalarField& f) {
      bin.write(reinterpret_cast<const char*>(f.coeffs().data()),
                static_cast<std::streamsize>(f.coeffs().size() * sizeof(cplx)));
    };
    for (int i = 0; i < 3; ++i) dump(final_state.u[i]);
    for (int i = 0; i < 6; ++i) dump(final_state.sigma.comp[i]);
  }
}

}  // namespace

RunResult run(const RunConfig& config) {
  config.validate();
  const Grid g(config.n, config.box_length);
  const DyadicBank bank(g, config.cutoff);
  ModelParams params;
  params.c0 = config.c0;
  params.validate();

  auto [u0, sigma0] = build_initial_data(config, bank);
  SimState state(g);
  state.u = std::move(u0);
  state.sigma = std::move(sigma0);
  state.t = 0.0;

  EnergyLedger ledger(bank, config.p, state.u, state.sigma);
  RunResult result;
  result.e0 = ledger.e0();
  result.out_dir = config.out_dir;

  std::vector<double> u_linf_samples;
  std::vector<double> u_low_b12_samples;

  ParticleTracker tracker;
  tracker.mode = config.particles.sampling;
  if (config.particles.enabled) {
    tracker.set.positions = config.particles.points;
    for (std::size_t i = 0; i < tracker.set.positions.size(); ++i)
      tracker.set.labels.push_back(static_cast<int>(i));
  }

  const auto sample_now = [&](const SimState& st) {
    ledger.update(st, params);
    u_linf_samples.push_back(lp_norm(st.u, kInf));
    u_low_b12_samples.push_back(
        besov_norm(bank, st.u, {0.5, 2, 1}, ShellRange::low));
    const double ratio = linf_bound_check(bank, st.sigma, config.p).ratio;
    result.max_embedding_ratio = std::max(result.max_embedding_ratio, ratio);
    if (config.particles.enabled) {
      const auto tr = trace_field(st.sigma);
      std::vector<double> tr_phys;
      if (tracker.mode == SamplingMode::trilinear) tr_phys = to_physical(tr);
      const double base = params.base_trace(st.t);
      for (std::size_t i = 0; i < tracker.set.size(); ++i) {
        ParticleSample s;
        s.t = st.t;
        s.particle_id = tracker.set.labels[i];
        s.position = tracker.set.positions[i];
        s.tr_tau_sampled =
            sample_trace_tau(tr, tr_phys, s.position, tracker.mode, base);
        if (st.t == 0.0 && tracker.set.initial_trace_values.size() <= i)
          tracker.set.initial_trace_values.push_back(s.tr_tau_sampled);
        const double y0 = tracker.set.initial_trace_values[i];
        const double tb = blowup_time(y0);
        s.tr_tau_exact = st.t < tb ? riccati_exact(y0, st.t)
                                   : std::numeric_limits<double>::quiet_NaN();
        result.particle_samples.push_back(s);
      }
    }
  };

  sample_now(state);

  long step_index = 0;
  bool done = false;
  while (!done) {
    // per-step maxima: CFL control and the blow-up declaration
    const auto tr_sigma = trace_field(state.sigma);
    const auto tr_phys = to_physical(tr_sigma);
    const double base = params.base_trace(state.t);
    double max_tr_sigma = 0.0, max_tr_tau = 0.0;
    for (double v : tr_phys) {
      max_tr_sigma = std::max(max_tr_sigma, std::abs(v));
      max_tr_tau = std::max(max_tr_tau, std::abs(v + base));
    }
    if (max_tr_tau > config.blowup_threshold) {
      result.blowup =
          BlowupReport{state.t, "trace threshold exceeded", max_tr_tau};
      break;
    }
    if (state.t >= config.t_end - 1e-12) {
      result.completed = true;
      break;
    }

    double dt;
    if (config.stepper.dt > 0.0) {
      dt = config.stepper.dt;
    } else {
      FieldMaxima mx;
      mx.max_u = lp_norm(state.u, kInf);
      mx.max_trace = max_tr_sigma;
      dt = suggest_dt(mx, g, config.stepper);
    }
    dt = std::min(dt, config.t_end - state.t);
    if (!(dt > 0.0) || dt < 1e-13) {
      result.blowup = BlowupReport{state.t, "step size collapsed", max_tr_sigma};
      break;
    }

    if (config.particles.enabled)
      tracker.set = advect(tracker.set, state.u, dt, tracker.mode);

    StepperConfig cfg = config.stepper;
    cfg.dt = dt;
    auto res = step(state, cfg, params);
    if (res.blowup) {
      result.blowup = res.blowup;
      state = std::move(res.state);
      break;
    }
    state = std::move(res.state);
    ++step_index;

    const bool final_step = state.t >= config.t_end - 1e-12;
    if (step_index % config.sample_every == 0 || final_step)
      sample_now(state);
    if (final_step) {
      result.completed = true;
      done = true;
    }
  }

  result.final_time = state.t;
  result.history = ledger.history();
  result.final_energy = ledger.running();
  evaluate_scenario_checks(config, result, u_linf_samples, u_low_b12_samples);
  if (!config.out_dir.empty()) persist_run(config, result, state);
  return result;
}

}  // namespace ptt
