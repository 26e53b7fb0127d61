// Copyright 2026 The aquo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aquo/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <openssl/opensslv.h>

#include "aquo/trajectory.hpp"

namespace aquo {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSummaryName = "summary.json";

const char* const kScenarioNames[] = {"synth", "stabilize", "sweep", "zeno", "coherence", "sicpovm", "diamond"};

Json noise_defaults() {
  return Json{{"cavity_lifetime_us", kCavityLifetimeUs}, {"depol_p", kDefaultDepolP}, {"noise_free", false}};
}

NoiseModel noise_from(const Json& p) {
  if (p.at("noise_free").get<bool>()) return NoiseModel::none();
  NoiseModel nm;
  const double lifetime = p.at("cavity_lifetime_us").get<double>();
  require(lifetime > 0.0, ErrorKind::ConfigError, "cavity_lifetime_us must be positive");
  nm.kappa_s = 1.0 / lifetime;
  nm.depol_p = p.at("depol_p").get<double>();
  require(nm.depol_p >= 0.0 && nm.depol_p <= 1.0, ErrorKind::ConfigError, "depol_p must lie in [0, 1]");
  return nm;
}

bool same_kind(const Json& def, const Json& v) {
  if (def.is_number()) return v.is_number();
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_string()) return v.is_string();
  if (def.is_array()) return v.is_array();
  return v.is_string() || v.is_object();
}

void set_param(Json& params, const std::string& key, const Json& value) {
  require(params.contains(key), ErrorKind::ConfigError, "unknown parameter '" + key + "'");
  const Json& def = params.at(key);
  // Channel specifications may be a named id or an inline channel object.
  const bool channel_slot = key == "a" || key == "b" || key == "channel";
  require(channel_slot ? (value.is_string() || value.is_object()) : same_kind(def, value),
          ErrorKind::ConfigError, "parameter '" + key + "' has the wrong type");
  if (def.is_number_integer())
    require(value.is_number_integer(), ErrorKind::ConfigError, "parameter '" + key + "' must be an integer");
  params[key] = value;
}

Json parse_override_value(const std::string& text, const Json& def) {
  if (def.is_string()) return Json(text);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception&) {
    return Json(text);
  }
}

std::string json_string(const Json& j) {
  return j.is_string() ? j.get<std::string>() : j.dump();
}

KrausChannel channel_param(const Json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (!s.empty() && s.front() == '@') return channel_from_json(read_json_file(s.substr(1)));
  }
  return channel_from_spec(v);
}

Json versions_json() {
  return Json{{"aquo", kVersion},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
              {"openssl", OPENSSL_VERSION_TEXT},
              {"compiler", __VERSION__}};
}

struct Artifacts {
  fs::path dir;
  std::vector<fs::path> files;

  fs::path add(const std::string& name) {
    files.push_back(dir / name);
    return files.back();
  }
  void csv(const CsvWriter& w) {
    w.flush();
    files.push_back(w.path());
  }
  void json(const std::string& name, const Json& j) { write_json_file(add(name), j); }
};

std::vector<double> probability_row(const RealVector& p) {
  return {p.data(), p.data() + p.size()};
}

// --- scenario runners ---------------------------------------------------------------

Json run_synth(const RunConfig& cfg, Artifacts& out) {
  const Json& p = cfg.params;
  const double eps = p.at("epsilon").get<double>();
  require(eps > 0.0, ErrorKind::ConfigError, "epsilon must be positive");
  const int rank = p.at("random_rank").get<int>();
  KrausChannel ch = [&] {
    if (rank > 0) {
      std::mt19937_64 rng(cfg.seed);
      return random_channel(p.at("dim").get<int>(), rank, rng);
    }
    return channel_param(p.at("channel"));
  }();
  const TreePlan plan = synthesize(ch, eps);
  const KrausChannel back = recompose(plan);
  Json residuals = Json::object();
  double worst = 0.0;
  for (const auto& [prefix, pair] : plan.nodes) {
    const double r = node_residual(plan, prefix);
    worst = std::max(worst, r);
    residuals[prefix] = r;
  }
  const auto unitaries = plan_to_unitaries(plan);
  out.json("plan.json", plan_to_json(plan));
  out.json("channel.json", channel_to_json(ch));
  const Json report{{"dim", plan.dim},
                    {"operators", ch.size()},
                    {"layers", plan.layers},
                    {"epsilon", eps},
                    {"choi_distance", choi_distance(ch, back)},
                    {"node_residuals", residuals},
                    {"max_node_residual", worst},
                    {"unitaries", unitaries.size()}};
  out.json("report.json", report);
  return report;
}

StabilizationConfig stab_config(const RunConfig& cfg, double t_int) {
  const Json& p = cfg.params;
  StabilizationConfig sc;
  sc.t_int = t_int;
  sc.t_max = p.at("t_max_us").get<double>();
  sc.probe_interval = p.at("probe_interval_us").get<double>();
  sc.ensemble = p.at("exact").get<bool>() ? 0 : cfg.ensemble;
  sc.seed = cfg.seed;
  sc.threads = p.at("threads").get<int>();
  return sc;
}

void write_decay(Artifacts& out, const std::string& name, const StabilizationResult& r) {
  CsvWriter w(out.dir / name, {"t_us", "chi_fidelity", "stderr"});
  for (std::size_t i = 0; i < r.times.size(); ++i) w.row({r.times[i], r.fidelity[i], r.stderr_fidelity[i]});
  out.csv(w);
}

Json run_stabilize(const RunConfig& cfg, Artifacts& out, bool& interrupted) {
  const NoiseModel nm = noise_from(cfg.params);
  StabilizationConfig sc = stab_config(cfg, cfg.params.at("t_int_us").get<double>());
  sc.stabilize = true;
  const StabilizationResult on = stabilization_experiment(sc, nm);
  write_decay(out, "stabilize_on.csv", on);
  interrupted = on.interrupted;
  Json summary{{"T1_on", on.fit.t1}, {"A_on", on.fit.amplitude}};
  if (!interrupted) {
    sc.stabilize = false;
    const StabilizationResult off = stabilization_experiment(sc, nm);
    write_decay(out, "stabilize_off.csv", off);
    interrupted = off.interrupted;
    summary["T1_off"] = off.fit.t1;
    summary["A_off"] = off.fit.amplitude;
    summary["ratio"] = on.fit.t1 / off.fit.t1;
  }
  return summary;
}

Json run_sweep(const RunConfig& cfg, Artifacts& out, bool& interrupted) {
  const NoiseModel nm = noise_from(cfg.params);
  const auto intervals = cfg.params.at("intervals_us").get<std::vector<double>>();
  require(!intervals.empty(), ErrorKind::ConfigError, "intervals_us must not be empty");
  const StabilizationConfig base = stab_config(cfg, intervals.front());
  const std::vector<SweepPoint> pts = interval_sweep(intervals, base, nm);
  interrupted = pts.size() < intervals.size() || cancel_requested();
  CsvWriter w(out.dir / "sweep.csv", {"t_int_us", "T1_us"});
  std::size_t best = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    w.row({pts[i].t_int, pts[i].t1});
    if (pts[i].t1 > pts[best].t1) best = i;
  }
  out.csv(w);
  const bool interior = best > 0 && best + 1 < pts.size();
  return Json{{"best_t_int_us", pts[best].t_int}, {"best_T1_us", pts[best].t1}, {"interior_maximum", interior}};
}

Json run_zeno(const RunConfig& cfg, Artifacts& out, bool& interrupted) {
  const Json& p = cfg.params;
  const NoiseModel nm = noise_from(p);
  ZenoConfig zc;
  zc.dim = p.at("dim").get<int>();
  zc.t_int = p.at("t_int_us").get<double>();
  zc.t_max = p.at("t_max_us").get<double>();
  zc.alpha = cplx(p.at("alpha_re").get<double>(), p.at("alpha_im").get<double>());
  zc.ensemble = p.at("exact").get<bool>() ? 0 : cfg.ensemble;
  zc.seed = cfg.seed;
  zc.threads = p.at("threads").get<int>();
  zc.snapshot_times = p.at("snapshots_us").get<std::vector<double>>();
  const double kappa = 2.0 * std::numbers::pi * p.at("kappa_khz").get<double>() * 1e-3;  // 1/us
  const ZenoResult r = zeno_experiment(kappa, zc, nm);
  interrupted = r.interrupted;
  CsvWriter w(out.dir / "zeno.csv", {"t_us", "p0", "p1", "p2", "p3", "p4", "p5", "p_rest"});
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    std::vector<double> row{r.times[i]};
    for (Eigen::Index k = 0; k < r.populations[i].size(); ++k) row.push_back(r.populations[i](k));
    w.row(row);
  }
  out.csv(w);
  Json snaps = Json::array();
  for (const auto& [t, rho] : r.snapshots) {
    const std::string name = "snapshot_t" + format_number(t) + ".json";
    out.json(name, Json{{"t_us", t}, {"trace", rho.trace().real()}, {"rho", matrix_to_json(rho)}});
    snaps.push_back(name);
  }
  Json summary{{"kappa_khz", p.at("kappa_khz")}, {"snapshots", snaps}};
  const auto i20 = static_cast<std::size_t>(std::llround(20.0 / zc.t_int));
  if (i20 < r.populations.size() && std::abs(i20 * zc.t_int - 20.0) < 1e-9)
    summary["p01_at_20us"] = r.populations[i20](0) + r.populations[i20](1);
  return summary;
}

Json stage_json(const CoherenceStage& s) {
  return Json{{"name", s.name}, {"fidelity", s.fidelity}, {"coherence", s.coherence}, {"rho", matrix_to_json(s.rho)}};
}

Json run_coherence(const RunConfig& cfg, Artifacts& out) {
  const Json& p = cfg.params;
  CoherenceConfig cc;
  cc.state = p.at("state").get<std::string>();
  cc.sio = p.at("sio").get<int>();
  cc.depol_p = p.at("noise_free").get<bool>() ? 0.0 : p.at("depol_p").get<double>();
  cc.shots = p.at("shots").get<int>();
  cc.seed = cfg.seed;
  const CoherenceResult r = coherence_pipeline(cc);
  Json stages = Json::array();
  for (const auto& s : r.stages) stages.push_back(stage_json(s));
  CsvWriter w(out.dir / "sic_outcomes.csv", {"outcome", "probability", "fitted"});
  for (Eigen::Index k = 0; k < r.probs.size(); ++k)
    w.row({static_cast<double>(k), r.probs(k), r.reconstruction.probs_fitted(k)});
  out.csv(w);
  const Json report{{"stages", stages},
                    {"probs", probability_row(r.probs)},
                    {"rho_linear", matrix_to_json(r.reconstruction.rho_linear)},
                    {"rho_mle", matrix_to_json(r.reconstruction.rho_mle)},
                    {"fidelity", r.stages.back().fidelity},
                    {"coherence", r.stages.back().coherence}};
  out.json("report.json", report);
  return Json{{"fidelity", r.stages.back().fidelity}, {"coherence", r.stages.back().coherence}};
}

Json run_sicpovm(const RunConfig& cfg, Artifacts& out) {
  const int d = cfg.params.at("d").get<int>();
  const int shots = cfg.params.at("shots").get<int>();
  require(shots >= 0, ErrorKind::ConfigError, "shots must be >= 0");
  const auto rows = sic_probability_matrix(d, shots, cfg.seed);
  std::vector<std::string> header{"input"};
  for (int k = 0; k < d * d; ++k) header.push_back("p" + std::to_string(k));
  CsvWriter w(out.dir / "sic_probabilities.csv", header);
  for (std::size_t x = 0; x < rows.size(); ++x) {
    std::vector<double> row{static_cast<double>(x)};
    for (Eigen::Index k = 0; k < rows[x].size(); ++k) row.push_back(rows[x](k));
    w.row(row);
  }
  out.csv(w);
  const SicPovm sic = build_sic(d);
  Json states = Json::array();
  Json elements = Json::array();
  for (const auto& s : sic.states) states.push_back(matrix_to_json(s));
  for (const auto& m : sic.elements.elements()) elements.push_back(matrix_to_json(m));
  out.json("sic.json", Json{{"dim", d}, {"fiducial", matrix_to_json(sic.fiducial)}, {"states", states},
                            {"elements", elements}});
  return Json{{"dim", d}, {"shots", shots}};
}

Json run_diamond(const RunConfig& cfg, Artifacts& out) {
  const KrausChannel a = channel_param(cfg.params.at("a"));
  const KrausChannel b = channel_param(cfg.params.at("b"));
  require(a.dim() == b.dim(), ErrorKind::DimensionMismatch, "diamond: channels differ in dimension");
  const DiamondResult r = diamond_distance(a, b);
  const Json report{{"a", json_string(cfg.params.at("a"))},
                    {"b", json_string(cfg.params.at("b"))},
                    {"diamond_distance", r.value},
                    {"sandwich_lower", r.lower_bound},
                    {"sandwich_upper", r.upper_bound},
                    {"certified_lower", r.certified_lower},
                    {"certified_upper", r.certified_upper},
                    {"p_succ", succ_probability(r.value)},
                    {"iterations", r.iterations},
                    {"status", r.converged ? "converged" : "NoConvergence"}};
  out.json("report.json", report);
  return report;
}

}  // namespace

// --- configuration -------------------------------------------------------------------

Scenario parse_scenario(std::string_view name) {
  for (int i = 0; i < 7; ++i)
    if (name == kScenarioNames[i]) return static_cast<Scenario>(i);
  throw Error(ErrorKind::ConfigError, "unknown scenario '" + std::string(name) + "'");
}

std::string to_string(Scenario s) { return kScenarioNames[static_cast<int>(s)]; }

Json default_params(Scenario s) {
  Json p;
  switch (s) {
    case Scenario::Synth:
      return Json{{"channel", "sio4"}, {"epsilon", kDefaultEpsilon}, {"random_rank", 0}, {"dim", 4}};
    case Scenario::Stabilize:
      p = noise_defaults();
      p.update(Json{{"t_int_us", 12.5}, {"t_max_us", 450.0}, {"probe_interval_us", 0.0}, {"exact", false},
                    {"threads", 0}});
      return p;
    case Scenario::Sweep:
      p = noise_defaults();
      p.update(Json{{"intervals_us", {5.0, 7.5, 10.0, 12.5, 15.0, 20.0, 25.0, 30.0, 40.0, 50.0}},
                    {"t_max_us", 450.0},
                    {"probe_interval_us", 0.0},
                    {"exact", false},
                    {"threads", 0}});
      return p;
    case Scenario::Zeno:
      p = noise_defaults();
      p.update(Json{{"kappa_khz", 80.0}, {"dim", 10}, {"t_int_us", 2.0}, {"t_max_us", 100.0}, {"alpha_re", 0.0},
                    {"alpha_im", -0.1}, {"snapshots_us", {16.0, 44.0, 100.0}}, {"exact", false}, {"threads", 0}});
      return p;
    case Scenario::Coherence:
      return Json{{"state", "mcs"}, {"sio", 0}, {"depol_p", kDefaultDepolP}, {"noise_free", false}, {"shots", 0}};
    case Scenario::Sicpovm:
      return Json{{"d", 4}, {"shots", 0}};
    case Scenario::Diamond:
      return Json{{"a", "depol:0.036:4"}, {"b", "identity:4"}};
  }
  return p;
}

void RunConfig::validate() const {
  require(ensemble >= 1, ErrorKind::ConfigError, "ensemble must be at least 1");
  require(!output_dir.empty(), ErrorKind::ConfigError, "output directory is required");
  const Json defaults = default_params(scenario);
  for (const auto& [key, value] : params.items())
    require(defaults.contains(key), ErrorKind::ConfigError, "unknown parameter '" + key + "'");
}

Json RunConfig::to_json() const {
  return Json{{"scenario", to_string(scenario)}, {"seed", seed}, {"ensemble", ensemble}, {"params", params}};
}

RunConfig build_run_config(Scenario s, const Json& file_config, const std::vector<std::string>& overrides,
                           std::optional<std::uint64_t> seed, const fs::path& output_dir) {
  RunConfig cfg;
  cfg.scenario = s;
  cfg.output_dir = output_dir;
  cfg.params = default_params(s);
  auto apply = [&](const std::string& key, const Json& value) {
    if (key == "seed") {
      require(value.is_number_unsigned() || (value.is_number_integer() && value.get<long long>() >= 0),
              ErrorKind::ConfigError, "seed must be a nonnegative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "ensemble") {
      require(value.is_number_integer(), ErrorKind::ConfigError, "ensemble must be an integer");
      cfg.ensemble = value.get<int>();
    } else if (key == "scenario") {
      require(value.is_string() && value.get<std::string>() == to_string(s), ErrorKind::ConfigError,
              "config file names a different scenario");
    } else {
      set_param(cfg.params, key, value);
    }
  };
  if (!file_config.is_null()) {
    require(file_config.is_object(), ErrorKind::ConfigError, "config must be a JSON object");
    for (const auto& [key, value] : file_config.items()) apply(key, value);
  }
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    require(eq != std::string::npos && eq > 0, ErrorKind::ConfigError, "override '" + kv + "' is not key=value");
    const std::string key = kv.substr(0, eq);
    const std::string text = kv.substr(eq + 1);
    const Json def = cfg.params.contains(key) ? cfg.params.at(key) : Json(0);
    apply(key, parse_override_value(text, def));
  }
  if (seed) cfg.seed = *seed;
  cfg.validate();
  return cfg;
}

// --- manifest ------------------------------------------------------------------------------

Json RunManifest::to_json() const {
  Json files_j = Json::array();
  for (const auto& f : files) files_j.push_back(Json{{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return Json{{"config", config},
              {"seed", config.value("seed", 0ULL)},
              {"files", files_j},
              {"versions", versions},
              {"wall_seconds", wall_seconds},
              {"interrupted", interrupted}};
}

RunManifest RunManifest::from_json(const Json& j) {
  RunManifest m;
  try {
    m.config = j.at("config");
    for (const auto& f : j.at("files"))
      m.files.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>(),
                         f.at("bytes").get<std::uintmax_t>()});
    m.versions = j.value("versions", Json::object());
    m.wall_seconds = j.value("wall_seconds", 0.0);
    m.interrupted = j.value("interrupted", false);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("manifest: ") + e.what());
  }
  return m;
}

std::vector<std::string> verify_run_dir(const fs::path& dir) {
  const RunManifest m = RunManifest::from_json(read_json_file(dir / kManifestName));
  std::vector<std::string> problems;
  if (m.files.empty()) problems.push_back("manifest lists no files");
  for (const auto& f : m.files) {
    const fs::path p = dir / f.path;
    if (!fs::exists(p)) {
      problems.push_back(f.path + ": missing");
      continue;
    }
    if (fs::file_size(p) != f.bytes) problems.push_back(f.path + ": size differs");
    if (sha256_file(p) != f.sha256) problems.push_back(f.path + ": hash differs");
  }
  return problems;
}

// --- driver ----------------------------------------------------------------------------------

RunOutcome run_scenario(const RunConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  require(!ec && fs::is_directory(cfg.output_dir), ErrorKind::IoError,
          "cannot create output directory '" + cfg.output_dir.string() + "'");
  {
    const fs::path probe = cfg.output_dir / ".write_probe";
    std::ofstream test(probe);
    require(test.good(), ErrorKind::IoError, "output directory '" + cfg.output_dir.string() + "' is not writable");
    test.close();
    fs::remove(probe, ec);
  }

  Artifacts out{cfg.output_dir, {}};
  RunOutcome res;
  try {
    switch (cfg.scenario) {
      case Scenario::Synth: res.summary = run_synth(cfg, out); break;
      case Scenario::Stabilize: res.summary = run_stabilize(cfg, out, res.interrupted); break;
      case Scenario::Sweep: res.summary = run_sweep(cfg, out, res.interrupted); break;
      case Scenario::Zeno: res.summary = run_zeno(cfg, out, res.interrupted); break;
      case Scenario::Coherence: res.summary = run_coherence(cfg, out); break;
      case Scenario::Sicpovm: res.summary = run_sicpovm(cfg, out); break;
      case Scenario::Diamond: res.summary = run_diamond(cfg, out); break;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  res.interrupted = res.interrupted || cancel_requested();
  res.summary["scenario"] = to_string(cfg.scenario);
  res.summary["seed"] = cfg.seed;
  res.summary["interrupted"] = res.interrupted;
  out.json(kSummaryName, res.summary);

  RunManifest m;
  m.config = cfg.to_json();
  m.versions = versions_json();
  m.interrupted = res.interrupted;
  for (const auto& f : out.files)
    m.files.push_back({fs::relative(f, cfg.output_dir).generic_string(), sha256_file(f), fs::file_size(f)});
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json_file(cfg.output_dir / kManifestName, m.to_json());
  res.files = out.files;
  return res;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoConvergence:
    case ErrorKind::NegativeEigenvalue:
    case ErrorKind::Singular:
    case ErrorKind::NonFinite:
    case ErrorKind::DegenerateState:
    case ErrorKind::FitFailed:
    case ErrorKind::SingularDesign:
    case ErrorKind::SingularFrame:
    case ErrorKind::NotPSD:
      return 3;
    default:
      return 2;
  }
}

Json error_json(const Error& e) {
  return Json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}, {"exit_code", exit_code_for(e.kind())}};
}

// --- coherence pipeline ------------------------------------------------------------------------

namespace {

ComplexMatrix sum_branches(const std::vector<ComplexMatrix>& branches) {
  ComplexMatrix s = ComplexMatrix::Zero(branches.front().rows(), branches.front().cols());
  for (const auto& b : branches) s += b;
  return 0.5 * (s + s.adjoint());
}

TreePlan state_prep_plan(const std::string& state) {
  if (state == "mms") return mms_prep_plan();
  require(state == "mcs", ErrorKind::ConfigError, "state must be 'mcs' or 'mms'");
  const ComplexMatrix mcs = ComplexMatrix::Constant(4, 1, 0.5);
  TreePlan plan;
  plan.dim = 4;
  plan.layers = 1;
  plan.nodes[""] = {complete_isometry(mcs), ComplexMatrix::Zero(4, 4)};
  return plan;
}

// Empirical frequencies of `shots` draws from p.
RealVector sample_frequencies(const RealVector& p, int shots, std::mt19937_64& rng) {
  RealVector counts = RealVector::Zero(p.size());
  std::vector<double> cdf(static_cast<std::size_t>(p.size()));
  double acc = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) cdf[static_cast<std::size_t>(k)] = acc += p(k);
  for (int s = 0; s < shots; ++s) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), uniform01(rng) * acc);
    counts(std::min<Eigen::Index>(it - cdf.begin(), p.size() - 1)) += 1.0;
  }
  return counts / shots;
}

CoherenceStage make_stage(std::string name, const ComplexMatrix& rho, const ComplexMatrix& target) {
  const DensityMatrix r(rho);
  const DensityMatrix t(target);
  return {std::move(name), r.mat(), t.mat(), state_fidelity(t, r), rel_entropy_coherence(r)};
}

}  // namespace

CoherenceResult coherence_pipeline(const CoherenceConfig& cfg) {
  require(cfg.sio == 0 || cfg.sio == 2 || cfg.sio == 4, ErrorKind::ConfigError, "sio must be 0, 2 or 4");
  require(cfg.shots >= 0, ErrorKind::ConfigError, "shots must be >= 0");
  require(cfg.depol_p >= 0.0 && cfg.depol_p <= 1.0, ErrorKind::ConfigError, "depol_p must lie in [0, 1]");
  const KrausChannel noise = depolarizing_channel(cfg.depol_p, 4);
  const KrausChannel* layer_noise = cfg.depol_p > 0.0 ? &noise : nullptr;
  const ComplexMatrix ground = DensityMatrix::basis_state(4, 0).mat();

  CoherenceResult res;
  const TreePlan prep = state_prep_plan(cfg.state);
  ComplexMatrix rho = sum_branches(execute_plan(prep, ground, layer_noise));
  ComplexMatrix ideal = sum_branches(execute_plan(prep, ground));
  res.stages.push_back(make_stage("prepared", rho, ideal));

  if (cfg.sio != 0) {
    const TreePlan sio = synthesize(named_channel(cfg.sio == 2 ? NamedChannelId::sio2() : NamedChannelId::sio4()));
    rho = sum_branches(execute_plan(sio, rho, layer_noise));
    ideal = sum_branches(execute_plan(sio, ideal));
    res.stages.push_back(make_stage("sio" + std::to_string(cfg.sio), rho, ideal));
  }

  const SicPovm sic = build_sic(4);
  const TreePlan readout = synthesize(named_channel(NamedChannelId::sic(4)));
  const auto branches = execute_plan(readout, rho, layer_noise);
  RealVector probs(static_cast<Eigen::Index>(branches.size()));
  for (std::size_t k = 0; k < branches.size(); ++k) probs(static_cast<Eigen::Index>(k)) = std::max(branches[k].trace().real(), 0.0);
  probs /= probs.sum();
  if (cfg.shots > 0) {
    std::mt19937_64 rng(cfg.seed);
    probs = sample_frequencies(probs, cfg.shots, rng);
  }
  res.probs = probs;
  res.reconstruction = reconstruct(sic, probs);
  res.stages.push_back(make_stage("reconstructed", res.reconstruction.rho_mle, ideal));
  return res;
}

std::vector<RealVector> sic_probability_matrix(int d, int shots, std::uint64_t seed) {
  require(d >= 2 && d <= 4, ErrorKind::UnsupportedDim, "sicpovm: d must be 2, 3 or 4");
  require(shots >= 0, ErrorKind::ConfigError, "shots must be >= 0");
  const SicPovm sic = build_sic(d);
  std::vector<RealVector> rows;
  for (std::size_t x = 0; x < sic.states.size(); ++x) {
    const ComplexVector& phi = sic.states[x];
    RealVector p = povm_probabilities(sic.elements, phi * phi.adjoint());
    if (shots > 0) {
      std::mt19937_64 rng(stream_seed(seed, x));
      p = sample_frequencies(p, shots, rng);
    } else {
      p /= p.sum();
    }
    rows.push_back(std::move(p));
  }
  return rows;
}

}  // namespace aquo
