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

// JSON and CSV serialization of matrices, channels, plans and protocols.
//
// Matrix JSON:  {"rows": r, "cols": c, "re": [[...]], "im": [[...]]}
// Channel JSON: {"dim": d, "label": "...", "ops": [matrix, ...]}
// Plan JSON:    {"dim": d, "layers": n, "epsilon": e,
//                "nodes": {"": [matrix, matrix], "0": [...], ...}}
// Protocol JSON: [{"type": "channel"|"tree"|"displace"|"idle", ...}, ...]

#ifndef AQUO_IO_HPP
#define AQUO_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "aquo/channel.hpp"
#include "aquo/trajectory.hpp"
#include "aquo/tree.hpp"

namespace aquo {

using Json = nlohmann::json;

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json channel_to_json(const KrausChannel& ch);
/// Completeness is classified on load; sub-normalized sets are rejected.
KrausChannel channel_from_json(const Json& j);

Json plan_to_json(const TreePlan& plan);
TreePlan plan_from_json(const Json& j);

/// Protocol steps:
///   {"type": "channel", "channel": <channel JSON or named id>, "depolarize": b, "duration_us": t}
///   {"type": "tree", "plan": <plan JSON>, "depolarize": b, "duration_us": t}
///   {"type": "displace", "alpha_re": x, "alpha_im": y, "duration_us": t}
///   {"type": "idle", "duration_us": t}
/// Omitted durations default to the configured interval.
std::vector<Step> protocol_from_json(const Json& j);

/// Channel given either as a channel JSON object or as a named-id string.
KrausChannel channel_from_spec(const Json& j);

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double x);

class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, std::vector<std::string> header);

  void row(const std::vector<double>& values);
  /// Writes the file; rows are buffered until then so output is atomic per file.
  void flush() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::vector<std::string> header_;
  std::vector<std::string> lines_;
};

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace aquo

#endif  // AQUO_IO_HPP
