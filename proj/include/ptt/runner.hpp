#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptt/diagnostics.hpp"
#include "ptt/integrator.hpp"
#include "ptt/lagrangian.hpp"

namespace ptt {

/// Configuration problems surface as this (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Scenario { special_solution, small_data, negative_trace_blowup, custom };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

/// One explicit Fourier mode of the initial data; the conjugate mode at -k
/// is set automatically. Velocity modes are Leray-projected afterwards.
struct ModeSpec {
  std::string target;            // "u" or "sigma"
  std::array<int, 3> k{};
  std::vector<cplx> components;  // 3 entries for u, 6 for sigma
};

struct InitialDataSpec {
  enum class Kind { zero, random, modes };
  Kind kind = Kind::random;
  std::uint64_t seed = 1;
  double delta0 = 1e-3;    // target initial energy (small_data)
  double u_amplitude = 1e-2;  // velocity scale (negative_trace_blowup)
  std::vector<ModeSpec> modes;
};

struct BlowupScenarioSpec {
  double trace_min = -1.0;  // most negative initial trace, at the tracked point
  double flatness = 0.5;    // 0 = pure cosine profile, ->1 = flat negative level
  Vec3 tracked_point = {std::numbers::pi, std::numbers::pi, std::numbers::pi};
};

struct ParticleConfig {
  bool enabled = false;
  std::vector<Vec3> points;
  SamplingMode sampling = SamplingMode::trilinear;
};

struct RunConfig {
  int n = 32;
  double box_length = two_pi;
  int p = 2;
  double c0 = 1.0;
  int cutoff = 2;  // low/high split shell
  Scenario scenario = Scenario::small_data;
  InitialDataSpec initial;
  BlowupScenarioSpec blowup_scenario;
  StepperConfig stepper;
  double t_end = 1.0;
  double blowup_threshold = 1e6;  // on max |tr tau|
  int sample_every = 1;
  ParticleConfig particles;
  std::string out_dir;

  void validate() const;
};

RunConfig config_from_json(const std::string& json_text);
std::string config_to_json(const RunConfig& config);
RunConfig load_config(const std::string& path);
/// Ready-to-run defaults per scenario (grids, steppers, particles).
RunConfig default_config(Scenario scenario);

/// Initial data per scenario. small_data rescales so that the initial
/// energy equals delta0 exactly; negative_trace_blowup shapes tr tau_0 to
/// attain trace_min at the tracked point.
std::pair<SpectralVectorField, SpectralTensorField> build_initial_data(
    const RunConfig& config, const DyadicBank& bank);

struct ScenarioCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
};

struct RunResult {
  bool completed = false;  // reached t_end without blow-up
  std::optional<BlowupReport> blowup;
  double final_time = 0.0;
  double e0 = 0.0;
  EnergyBreakdown final_energy;
  std::vector<SampleRow> history;
  std::vector<ParticleSample> particle_samples;
  std::vector<ScenarioCheck> checks;
  double max_embedding_ratio = 0.0;
  std::string out_dir;

  bool checks_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Drive the loop: step, update the ledger, advect tracked particles,
/// persist history/manifest/final state under config.out_dir (when set).
RunResult run(const RunConfig& config);

/// CSV column schema of the history file, in order.
std::vector<std::string> history_columns();
std::string history_row_csv(const SampleRow& row);

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
};

std::vector<CheckResult> verify_operators();
std::vector<CheckResult> verify_lp();
std::vector<CheckResult> verify_model();
std::vector<CheckResult> verify_integrator();
/// Compares probe ratios against pinned baselines; when the baselines file
/// is missing and record_if_missing is set, runs in recording mode and
/// writes it.
std::vector<CheckResult> verify_probes(const std::string& baselines_path,
                                       bool record_if_missing);

struct VerifySummary {
  std::string suite;
  bool pass = false;
  std::vector<CheckResult> checks;
};
VerifySummary verify(const std::string& suite,
                     const std::string& baselines_path);
std::string verify_summary_json(const VerifySummary& summary);

}  // namespace ptt
