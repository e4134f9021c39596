#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "ptt/probes.hpp"
#include "ptt/runner.hpp"

// Exit codes: 0 success, 1 verification failure, 2 config error,
// 3 runtime blow-up in a scenario not expecting it.

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::uint64_t seed, bool seed_set) {
  ptt::RunConfig config;
  try {
    config = ptt::load_config(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (seed_set) config.initial.seed = seed;
    config.validate();
  } catch (const ptt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  ptt::RunResult result;
  try {
    result = ptt::run(config);
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 2;
  }

  std::printf("scenario: %s\n", ptt::to_string(config.scenario).c_str());
  std::printf("final time: %.6g  (e0 = %.6g)\n", result.final_time, result.e0);
  std::printf("energies: low_sup=%.6g low_dissipation=%.6g high_mixed=%.6g "
              "trace_integrals=%.6g total=%.6g\n",
              result.final_energy.low_sup(),
              result.final_energy.low_dissipation(),
              result.final_energy.high_mixed(),
              result.final_energy.trace_integrals(),
              result.final_energy.total());
  if (result.blowup) {
    std::printf("blow-up declared at t = %.6g (%s, max trace %.3g)\n",
                result.blowup->t, result.blowup->reason.c_str(),
                result.blowup->max_trace);
  }
  for (const auto& c : result.checks) {
    std::printf("[%s] %s: value=%.6g bound=%.6g\n", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.value, c.bound);
  }
  if (!result.out_dir.empty())
    std::printf("artifacts written to %s\n", result.out_dir.c_str());

  const bool expected_blowup =
      config.scenario == ptt::Scenario::negative_trace_blowup;
  if (result.blowup && !expected_blowup) return 3;
  if (!result.checks_pass()) return 1;
  return 0;
}

int cmd_verify(const std::string& suite, const std::string& baselines) {
  ptt::VerifySummary summary;
  try {
    summary = ptt::verify(suite, baselines);
  } catch (const ptt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  std::cout << ptt::verify_summary_json(summary) << "\n";
  return summary.pass ? 0 : 1;
}

int cmd_probe(const std::string& estimate, int samples, std::uint64_t seed,
              int p, int n) {
  try {
    const ptt::Grid g(n);
    const ptt::DyadicBank bank(g, 2);
    ptt::ProbeReport rep;
    if (estimate == "commutator") {
      rep = ptt::commutator_probe(bank, seed, samples, p);
    } else if (estimate == "product") {
      rep = ptt::product_probe(bank, seed, samples, p);
    } else {
      std::cerr << "unknown estimate id: " << estimate << "\n";
      return 2;
    }
    std::printf("{\n  \"estimate_id\": \"%s\",\n  \"seed\": %llu,\n"
                "  \"samples\": %d,\n  \"p\": %d,\n  \"grid_n\": %d,\n"
                "  \"pass\": %s,\n  \"inequalities\": [\n",
                rep.estimate_id.c_str(),
                static_cast<unsigned long long>(rep.seed), rep.sample_count,
                rep.p, rep.grid_n, rep.pass ? "true" : "false");
    for (std::size_t i = 0; i < rep.inequalities.size(); ++i) {
      const auto& s = rep.inequalities[i];
      std::printf("    {\"name\": \"%s\", \"min\": %.6g, \"median\": %.6g, "
                  "\"max\": %.6g, \"skipped\": %d}%s\n",
                  s.name.c_str(), s.min, s.median, s.max, s.skipped,
                  i + 1 < rep.inequalities.size() ? "," : "");
    }
    std::printf("  ]\n}\n");
    return rep.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "probe failed: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral periodic-box solver for a viscoelastic "
               "stress-transport model with dyadic-frequency diagnostics"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run a configured scenario");
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  run_cmd->add_option("--config", config_path, "config file (JSON)")
      ->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "override the RNG seed");

  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "all";
  std::string baselines = "data/probe_baselines.json";
  verify_cmd->add_option("--suite", suite,
                         "operators|lp|model|integrator|probes|all");
  verify_cmd->add_option("--baselines", baselines,
                         "probe baselines file (recorded if missing)");

  auto* probe_cmd = app.add_subcommand("probe", "run an estimate probe");
  std::string estimate = "commutator";
  int samples = 100;
  std::uint64_t probe_seed = 20240801ull;
  int p = 2;
  int n = 32;
  probe_cmd->add_option("--estimate", estimate, "commutator|product");
  probe_cmd->add_option("--samples", samples, "sample count");
  probe_cmd->add_option("--seed", probe_seed, "RNG seed");
  probe_cmd->add_option("--p", p, "Lebesgue index (2, 3 or 4)");
  probe_cmd->add_option("--n", n, "grid resolution");

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed())
    return cmd_run(config_path, out_dir, seed, seed_opt->count() > 0);
  if (verify_cmd->parsed()) return cmd_verify(suite, baselines);
  if (probe_cmd->parsed())
    return cmd_probe(estimate, samples, probe_seed, p, n);
  return 2;
}
