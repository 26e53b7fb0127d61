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

#include "aquo/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace aquo {

namespace {

const Json& field(const Json& j, const char* key, const char* what) {
  require(j.is_object(), ErrorKind::ParseError, std::string(what) + ": expected an object");
  const auto it = j.find(key);
  require(it != j.end(), ErrorKind::ParseError, std::string(what) + ": missing '" + key + "'");
  return *it;
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    require(ok, ErrorKind::ParseError, std::string(what) + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string(what) + ": " + e.what());
  }
}

std::optional<double> optional_duration(const Json& j) {
  const auto it = j.find("duration_us");
  if (it == j.end() || it->is_null()) return std::nullopt;
  return get_as<double>(*it, "duration_us");
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array();
    Json ir = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  const auto rows = get_as<Eigen::Index>(field(j, "rows", "matrix"), "matrix rows");
  const auto cols = get_as<Eigen::Index>(field(j, "cols", "matrix"), "matrix cols");
  require(rows > 0 && cols > 0, ErrorKind::ParseError, "matrix: dimensions must be positive");
  const Json& re = field(j, "re", "matrix");
  const Json* im = j.contains("im") ? &j.at("im") : nullptr;
  ComplexMatrix m(rows, cols);
  auto read_grid = [&](const Json& g, bool imag) {
    require(g.is_array() && static_cast<Eigen::Index>(g.size()) == rows, ErrorKind::ParseError,
            "matrix: grid row count differs from 'rows'");
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Json& row = g[static_cast<std::size_t>(r)];
      require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols, ErrorKind::ParseError,
              "matrix: grid column count differs from 'cols'");
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double v = get_as<double>(row[static_cast<std::size_t>(c)], "matrix entry");
        require(std::isfinite(v), ErrorKind::ParseError, "matrix: non-finite entry");
        if (imag) {
          m(r, c).imag(v);
        } else {
          m(r, c) = cplx(v, 0.0);
        }
      }
    }
  };
  read_grid(re, false);
  if (im != nullptr) read_grid(*im, true);
  return m;
}

Json channel_to_json(const KrausChannel& ch) {
  Json ops = Json::array();
  for (const auto& e : ch.ops()) ops.push_back(matrix_to_json(e));
  return Json{{"dim", ch.dim()}, {"label", ch.label()}, {"strict", ch.strict()}, {"ops", std::move(ops)}};
}

KrausChannel channel_from_json(const Json& j) {
  check_keys(j, {"dim", "label", "strict", "ops"}, "channel");
  const Json& ops_j = field(j, "ops", "channel");
  require(ops_j.is_array() && !ops_j.empty(), ErrorKind::ParseError, "channel: 'ops' must be a non-empty list");
  std::vector<ComplexMatrix> ops;
  for (const auto& o : ops_j) ops.push_back(matrix_from_json(o));
  if (j.contains("dim")) {
    const int d = get_as<int>(j.at("dim"), "channel dim");
    for (const auto& o : ops)
      require(o.rows() == d && o.cols() == d, ErrorKind::DimensionMismatch,
              "channel: operator shape differs from 'dim'");
  }
  const std::string label = j.contains("label") ? get_as<std::string>(j.at("label"), "channel label") : "";
  KrausChannel ch = KrausChannel::classify(std::move(ops), label);
  require(ch.strict(), ErrorKind::IncompleteChannel, "channel: operators are not complete");
  return ch;
}

Json plan_to_json(const TreePlan& plan) {
  Json nodes = Json::object();
  for (const auto& [prefix, pair] : plan.nodes)
    nodes[prefix] = Json::array({matrix_to_json(pair.first), matrix_to_json(pair.second)});
  return Json{{"dim", plan.dim}, {"layers", plan.layers}, {"epsilon", plan.epsilon}, {"nodes", std::move(nodes)}};
}

TreePlan plan_from_json(const Json& j) {
  check_keys(j, {"dim", "layers", "epsilon", "nodes"}, "plan");
  TreePlan plan;
  plan.dim = get_as<int>(field(j, "dim", "plan"), "plan dim");
  plan.layers = get_as<int>(field(j, "layers", "plan"), "plan layers");
  if (j.contains("epsilon")) plan.epsilon = get_as<double>(j.at("epsilon"), "plan epsilon");
  const Json& nodes = field(j, "nodes", "plan");
  require(nodes.is_object(), ErrorKind::ParseError, "plan: 'nodes' must be an object");
  for (const auto& [key, pair] : nodes.items()) {
    require(pair.is_array() && pair.size() == 2, ErrorKind::ParseError, "plan: node must hold two matrices");
    plan.nodes[key] = {matrix_from_json(pair[0]), matrix_from_json(pair[1])};
  }
  try {
    plan.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, std::string("plan: ") + e.what());
  }
  return plan;
}

KrausChannel channel_from_spec(const Json& j) {
  if (!j.is_string()) return channel_from_json(j);
  const std::string s = j.get<std::string>();
  if (s == "x") {
    ComplexMatrix x = ComplexMatrix::Zero(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    return unitary_channel(x, "x");
  }
  if (s.rfind("identity:", 0) == 0) {
    int d = 0;
    const char* first = s.data() + 9;
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, d);
    require(res.ec == std::errc() && res.ptr == last && d >= 1, ErrorKind::BadParameter,
            "bad identity channel '" + s + "'");
    return identity_channel(d);
  }
  return named_channel(parse_named_channel(s));
}

std::vector<Step> protocol_from_json(const Json& j) {
  require(j.is_array(), ErrorKind::ParseError, "protocol: expected a list of steps");
  std::vector<Step> steps;
  for (const auto& s : j) {
    const auto type = get_as<std::string>(field(s, "type", "protocol step"), "step type");
    const bool depol = s.contains("depolarize") ? get_as<bool>(s.at("depolarize"), "depolarize") : true;
    if (type == "channel") {
      check_keys(s, {"type", "channel", "depolarize", "duration_us"}, "channel step");
      steps.push_back(Step::make_channel(channel_from_spec(field(s, "channel", "channel step")), depol,
                                         optional_duration(s)));
    } else if (type == "tree") {
      check_keys(s, {"type", "plan", "depolarize", "duration_us"}, "tree step");
      steps.push_back(Step::make_tree(plan_from_json(field(s, "plan", "tree step")), depol, optional_duration(s)));
    } else if (type == "displace") {
      check_keys(s, {"type", "alpha_re", "alpha_im", "depolarize", "duration_us"}, "displace step");
      const double re = s.contains("alpha_re") ? get_as<double>(s.at("alpha_re"), "alpha_re") : 0.0;
      const double im = s.contains("alpha_im") ? get_as<double>(s.at("alpha_im"), "alpha_im") : 0.0;
      const bool d = s.contains("depolarize") ? depol : false;
      steps.push_back(Step::make_displace(cplx(re, im), optional_duration(s).value_or(0.0), d));
    } else if (type == "idle") {
      check_keys(s, {"type", "duration_us"}, "idle step");
      steps.push_back(Step::make_idle(optional_duration(s)));
    } else {
      throw Error(ErrorKind::ParseError, "protocol: unknown step type '" + type + "'");
    }
  }
  return steps;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::IoError, "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::IoError, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  require(out.good(), ErrorKind::IoError, "write failed for '" + path.string() + "'");
}

std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(std::filesystem::path path, std::vector<std::string> header)
    : path_(std::move(path)), header_(std::move(header)) {}

void CsvWriter::row(const std::vector<double>& values) {
  require(values.size() == header_.size(), ErrorKind::IoError, "csv: row width differs from header");
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) line.push_back(',');
    line += format_number(values[i]);
  }
  lines_.push_back(std::move(line));
}

void CsvWriter::flush() const {
  std::ofstream out(path_, std::ios::binary);
  require(out.good(), ErrorKind::IoError, "cannot write '" + path_.string() + "'");
  for (std::size_t i = 0; i < header_.size(); ++i) out << (i > 0 ? "," : "") << header_[i];
  out << '\n';
  for (const auto& l : lines_) out << l << '\n';
  require(out.good(), ErrorKind::IoError, "write failed for '" + path_.string() + "'");
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::IoError, "cannot open '" + path.string() + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  require(ctx != nullptr, ErrorKind::IoError, "sha256: context allocation failed");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{md[i]};
  return hex.str();
}

}  // namespace aquo
