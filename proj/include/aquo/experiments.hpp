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

// Scenario runners behind the command-line tool, their configuration and the
// run manifest written next to every set of artifacts.

#ifndef AQUO_EXPERIMENTS_HPP
#define AQUO_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aquo/io.hpp"
#include "aquo/tomography.hpp"

namespace aquo {

inline constexpr const char* kVersion = "0.1.0";

enum class Scenario { Synth, Stabilize, Sweep, Zeno, Coherence, Sicpovm, Diamond };

Scenario parse_scenario(std::string_view name);
std::string to_string(Scenario s);

/// Every parameter a scenario accepts, with its default value. Keys outside
/// this set are rejected.
Json default_params(Scenario s);

struct RunConfig {
  Scenario scenario = Scenario::Synth;
  std::uint64_t seed = 1;
  int ensemble = 2000;
  std::filesystem::path output_dir;
  Json params;  // effective scenario parameters

  void validate() const;
  Json to_json() const;
};

/// Defaults, then the config file, then `key=value` overrides, then the seed
/// flag. The config file may also carry "seed" and "ensemble".
RunConfig build_run_config(Scenario s, const Json& file_config, const std::vector<std::string>& overrides,
                           std::optional<std::uint64_t> seed, const std::filesystem::path& output_dir);

struct ManifestEntry {
  std::string path;  // relative to the run directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  Json config;
  std::vector<ManifestEntry> files;
  Json versions;
  double wall_seconds = 0.0;
  bool interrupted = false;

  Json to_json() const;
  static RunManifest from_json(const Json& j);
};

inline constexpr const char* kManifestName = "manifest.json";

/// Problems found re-hashing a run directory against its manifest; empty
/// when every listed file exists and matches.
std::vector<std::string> verify_run_dir(const std::filesystem::path& dir);

struct RunOutcome {
  std::vector<std::filesystem::path> files;
  Json summary;
  bool interrupted = false;
};

/// Runs the scenario, writes its artifacts, summary.json and the manifest.
RunOutcome run_scenario(const RunConfig& cfg);

/// 0 success, 2 validation, 3 numerical failure.
int exit_code_for(ErrorKind kind);
Json error_json(const Error& e);

// --- coherence pipeline -------------------------------------------------------------

struct CoherenceConfig {
  std::string state = "mcs";  // "mcs" or "mms"
  int sio = 0;                // 0, 2 or 4
  double depol_p = kDefaultDepolP;  // after every tree layer
  int shots = 0;              // 0 = exact probabilities
  std::uint64_t seed = 1;
};

struct CoherenceStage {
  std::string name;
  ComplexMatrix rho;
  ComplexMatrix target;
  double fidelity = 0.0;
  double coherence = 0.0;
};

struct CoherenceResult {
  std::vector<CoherenceStage> stages;  // prepared, [sio], reconstructed
  RealVector probs;
  ReconstructionResult reconstruction;
};

/// Prepares the state from |0>, optionally applies an SIO and reads it out
/// through the 4-layer SIC tree. Targets are the noiseless counterparts.
CoherenceResult coherence_pipeline(const CoherenceConfig& cfg);

/// p(x, y) = Tr(M_y |phi_x><phi_x|) over the SIC states; shots > 0 samples
/// each row from a multinomial.
std::vector<RealVector> sic_probability_matrix(int d, int shots, std::uint64_t seed);

}  // namespace aquo

#endif  // AQUO_EXPERIMENTS_HPP
