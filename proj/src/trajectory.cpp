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

#include "aquo/trajectory.hpp"

#include "aquo/dilation.hpp"
#include "aquo/tomography.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <thread>

namespace aquo {

namespace {

constexpr double kBranchFloor = 1e-12;
constexpr int kChunk = 64;

std::atomic<bool> g_cancel{false};

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// A fixed Kraus set with cached E†E for branch probabilities.
struct Stage {
  std::vector<ComplexMatrix> ops;
  std::vector<ComplexMatrix> grams;

  explicit Stage(std::vector<ComplexMatrix> o) : ops(std::move(o)) {
    grams.reserve(ops.size());
    for (const auto& e : ops) grams.push_back(e.adjoint() * e);
  }
};

struct TreeStage {
  int layers = 0;
  std::map<std::string, Stage> nodes;  // complete pairs per prefix
  std::optional<Stage> noise;          // after every layer
};

struct Action {
  std::optional<Stage> fixed;
  std::optional<TreeStage> tree;
};

KrausChannel embed_ops(std::vector<ComplexMatrix> ops, int from, int to) {
  if (from == to) return KrausChannel(std::move(ops), {}, Normalization::Approximate);
  return embed(KrausChannel(std::move(ops), {}, Normalization::Approximate), to);
}

std::map<std::string, Stage> tree_pairs(const TreePlan& plan, int n) {
  require(plan.dim <= n, ErrorKind::DimensionMismatch, "tree acts on more levels than simulated");
  std::map<std::string, Stage> out;
  for (const auto& [prefix, u] : plan_to_unitaries(plan)) {
    auto [e0, e1] = extract_rank2(u);
    out.emplace(prefix, Stage(embed_ops({e0, e1}, plan.dim, n).ops()));
  }
  return out;
}

std::vector<Action> compile(const std::vector<Step>& protocol, const TrajectoryConfig& cfg,
                            const NoiseModel& noise) {
  const int n = cfg.dim;
  std::vector<Action> actions;
  for (const Step& step : protocol) {
    const double duration = step.duration.value_or(cfg.t_int);
    require(duration >= 0.0 && std::isfinite(duration), ErrorKind::InvalidProtocol,
            "step duration must be nonnegative");
    if (noise.apply_loss_during_interval && noise.kappa_s > 0.0 && duration > 0.0)
      actions.push_back({Stage(amplitude_damping(n, noise.kappa_s, duration).ops()), {}});

    int op_dim = n;
    switch (step.kind) {
      case StepKind::Idle:
        continue;
      case StepKind::Displace:
        actions.push_back({Stage({displacement_truncated(step.alpha, n)}), {}});
        break;
      case StepKind::Channel: {
        require(step.channel != nullptr, ErrorKind::InvalidProtocol, "channel step without channel");
        require(step.channel->dim() <= n, ErrorKind::DimensionMismatch,
                "channel acts on more levels than simulated");
        op_dim = step.channel->dim();
        actions.push_back({Stage(embed(*step.channel, n).ops()), {}});
        break;
      }
      case StepKind::Tree: {
        require(step.plan != nullptr, ErrorKind::InvalidProtocol, "tree step without plan");
        op_dim = step.plan->dim;
        TreeStage ts;
        ts.layers = step.plan->layers;
        ts.nodes = tree_pairs(*step.plan, n);
        if (step.depolarize && noise.depol_p > 0.0)
          ts.noise.emplace(depolarizing_channel_embedded(noise.depol_p, op_dim, n).ops());
        actions.push_back({{}, std::move(ts)});
        continue;
      }
    }
    if (step.depolarize && noise.depol_p > 0.0)
      actions.push_back({Stage(depolarizing_channel_embedded(noise.depol_p, op_dim, n).ops()), {}});
  }
  return actions;
}

int sample_stage(const Stage& st, ComplexVector& psi, double r) {
  const std::size_t m = st.ops.size();
  std::vector<double> p(m);
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double pj = psi.dot(st.grams[j] * psi).real();
    p[j] = pj >= kBranchFloor ? pj : 0.0;
    total += p[j];
  }
  require(total > 0.0, ErrorKind::DegenerateState, "every branch has vanishing probability");
  const double target = r * total;
  double cum = 0.0;
  std::size_t pick = m;
  std::size_t last = m;
  for (std::size_t j = 0; j < m; ++j) {
    if (p[j] == 0.0) continue;
    last = j;
    cum += p[j];
    if (target < cum) {
      pick = j;
      break;
    }
  }
  if (pick == m) pick = last;
  ComplexVector next = st.ops[pick] * psi;
  const double norm = next.norm();
  require(norm > 0.0, ErrorKind::DegenerateState, "selected branch annihilated the state");
  psi = next / norm;
  return static_cast<int>(pick);
}

struct Accumulator {
  std::vector<ComplexMatrix> rho;
  std::vector<RealVector> pop;
  std::vector<RealVector> pop_sq;
  std::vector<RealVector> obs;
  std::vector<RealVector> obs_sq;
  std::vector<TrajectoryRecord> records;
  int count = 0;

  Accumulator(int points, int n, std::size_t n_obs) {
    rho.assign(static_cast<std::size_t>(points), ComplexMatrix::Zero(n, n));
    pop.assign(static_cast<std::size_t>(points), RealVector::Zero(n));
    pop_sq = pop;
    obs.assign(static_cast<std::size_t>(points), RealVector::Zero(static_cast<Eigen::Index>(n_obs)));
    obs_sq = obs;
  }

  void add(const Accumulator& o) {
    for (std::size_t c = 0; c < rho.size(); ++c) {
      rho[c] += o.rho[c];
      pop[c] += o.pop[c];
      pop_sq[c] += o.pop_sq[c];
      obs[c] += o.obs[c];
      obs_sq[c] += o.obs_sq[c];
    }
    count += o.count;
    records.insert(records.end(), o.records.begin(), o.records.end());
  }
};

}  // namespace

// --- configuration ------------------------------------------------------------------

void NoiseModel::validate() const {
  require(kappa_s >= 0.0 && std::isfinite(kappa_s), ErrorKind::BadParameter, "kappa_s must be >= 0");
  require(depol_p >= 0.0 && depol_p <= 1.0, ErrorKind::BadParameter, "depol_p must lie in [0, 1]");
}

void TrajectoryConfig::validate() const {
  require(dim >= 1, ErrorKind::BadParameter, "truncation must be positive");
  require(t_int > 0.0 && std::isfinite(t_int), ErrorKind::BadParameter, "t_int must be positive");
  require(n_steps >= 0, ErrorKind::BadParameter, "n_steps must be nonnegative");
  require(ensemble >= 1, ErrorKind::BadParameter, "ensemble must be at least 1");
  for (const auto& o : observables)
    require(o.rows() == dim && o.cols() == dim, ErrorKind::DimensionMismatch,
            "observable dimension differs from the truncation");
}

Step Step::make_channel(KrausChannel ch, bool depolarize, std::optional<double> duration) {
  Step s;
  s.kind = StepKind::Channel;
  s.channel = std::make_shared<const KrausChannel>(std::move(ch));
  s.depolarize = depolarize;
  s.duration = duration;
  return s;
}

Step Step::make_tree(TreePlan plan, bool depolarize, std::optional<double> duration) {
  plan.validate();
  Step s;
  s.kind = StepKind::Tree;
  s.plan = std::make_shared<const TreePlan>(std::move(plan));
  s.depolarize = depolarize;
  s.duration = duration;
  return s;
}

Step Step::make_displace(cplx alpha, double duration, bool depolarize) {
  Step s;
  s.kind = StepKind::Displace;
  s.alpha = alpha;
  s.duration = duration;
  s.depolarize = depolarize;
  return s;
}

Step Step::make_idle(std::optional<double> duration) {
  Step s;
  s.kind = StepKind::Idle;
  s.duration = duration;
  s.depolarize = false;
  return s;
}

void request_cancel() noexcept { g_cancel.store(true); }
void clear_cancel() noexcept { g_cancel.store(false); }
bool cancel_requested() noexcept { return g_cancel.load(); }

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ index);
}

double uniform01(std::mt19937_64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// --- sampling -----------------------------------------------------------------------

std::pair<int, DensityMatrix> sample_jump(const KrausChannel& ch, const DensityMatrix& rho, double r) {
  require(ch.normalization() != Normalization::SubNormalized, ErrorKind::IncompleteChannel,
          "sample_jump: channel is not complete");
  require(rho.dim() == ch.dim(), ErrorKind::DimensionMismatch, "sample_jump: dimension mismatch");
  require(r >= 0.0 && r < 1.0, ErrorKind::OutOfRange, "sample_jump: r must lie in [0, 1)");
  std::vector<double> p(ch.size());
  double total = 0.0;
  for (std::size_t j = 0; j < ch.size(); ++j) {
    const double pj = (ch.op(j) * rho.mat() * ch.op(j).adjoint()).trace().real();
    p[j] = pj >= kBranchFloor ? pj : 0.0;
    total += p[j];
  }
  require(total > 0.0, ErrorKind::DegenerateState, "sample_jump: all branches vanish");
  double cum = 0.0;
  std::size_t pick = ch.size();
  std::size_t last = ch.size();
  for (std::size_t j = 0; j < ch.size(); ++j) {
    if (p[j] == 0.0) continue;
    last = j;
    cum += p[j] / total;
    if (r < cum) {
      pick = j;
      break;
    }
  }
  if (pick == ch.size()) pick = last;
  const ComplexMatrix out = ch.op(pick) * rho.mat() * ch.op(pick).adjoint();
  const double pj = out.trace().real();
  require(pj >= kBranchFloor, ErrorKind::DegenerateState, "sample_jump: selected branch vanishes");
  return {static_cast<int>(pick), DensityMatrix(out / pj)};
}

int sample_jump_pure(const std::vector<ComplexMatrix>& ops, ComplexVector& psi, double r) {
  return sample_stage(Stage(ops), psi, r);
}

// --- operators and channels ---------------------------------------------------------

ComplexMatrix lowering_operator(int n) {
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (int m = 1; m < n; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
  return a;
}

ComplexMatrix displacement_truncated(cplx alpha, int n) {
  require(n >= 1, ErrorKind::BadParameter, "truncation must be positive");
  require(std::norm(alpha) < n / 4.0, ErrorKind::TruncationTooSmall,
          "displacement needs |alpha|^2 < N/4");
  const ComplexMatrix a = lowering_operator(n);
  return expm(alpha * a.adjoint() - std::conj(alpha) * a);
}

KrausChannel amplitude_damping(int n, double kappa, double t) {
  require(n >= 1, ErrorKind::BadParameter, "truncation must be positive");
  require(kappa >= 0.0 && t >= 0.0, ErrorKind::BadParameter, "loss rate and time must be >= 0");
  const double eta = std::exp(-kappa * t);
  std::vector<ComplexMatrix> ops;
  for (int k = 0; k < n; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    for (int m = k; m < n; ++m) {
      const double binom = std::exp(std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0));
      e(m - k, m) = std::sqrt(binom) * std::pow(eta, 0.5 * (m - k)) * std::pow(1.0 - eta, 0.5 * k);
    }
    if (k > 0 && e.cwiseAbs().maxCoeff() == 0.0) break;
    ops.push_back(std::move(e));
  }
  return KrausChannel(std::move(ops), "loss");
}

LindbladGenerator cavity_loss_generator(int n, double lifetime) {
  require(lifetime > 0.0, ErrorKind::BadParameter, "lifetime must be positive");
  return LindbladGenerator(n, {{1.0 / (2.0 * lifetime), lowering_operator(n)}});
}

DensityMatrix lindblad_rk4(const LindbladGenerator& gen, const DensityMatrix& rho0, double t, double dt) {
  require(rho0.dim() == gen.dim(), ErrorKind::DimensionMismatch, "lindblad_rk4: dimension mismatch");
  require(t >= 0.0 && dt > 0.0, ErrorKind::BadParameter, "lindblad_rk4: need t >= 0 and dt > 0");
  const double stiff = gen.stiffness();
  require(dt <= t || t == 0.0, ErrorKind::StepTooLarge, "lindblad_rk4: dt exceeds t");
  require(stiff == 0.0 || dt <= 1e-3 / stiff * (1.0 + 1e-12), ErrorKind::StepTooLarge,
          "lindblad_rk4: dt exceeds 1e-3 / max kappa ||o†o||");
  const double steps_f = std::round(t / dt);
  require(std::abs(steps_f * dt - t) <= 1e-9 * std::max(t, 1.0), ErrorKind::BadParameter,
          "lindblad_rk4: dt must divide t");
  ComplexMatrix rho = rho0.mat();
  const auto steps = static_cast<long long>(steps_f);
  for (long long s = 0; s < steps; ++s) {
    const ComplexMatrix k1 = gen.rhs(rho);
    const ComplexMatrix k2 = gen.rhs(rho + 0.5 * dt * k1);
    const ComplexMatrix k3 = gen.rhs(rho + 0.5 * dt * k2);
    const ComplexMatrix k4 = gen.rhs(rho + dt * k3);
    rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

// --- deterministic oracle ----------------------------------------------------------------

namespace {

ComplexMatrix apply_stage(const Stage& st, const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& e : st.ops) out.noalias() += e * rho * e.adjoint();
  return out;
}

std::vector<ComplexMatrix> run_tree_branches(const std::map<std::string, Stage>& nodes, int layers,
                                             const Stage* noise, const ComplexMatrix& rho) {
  std::vector<ComplexMatrix> branches{rho};
  for (int len = 0; len < layers; ++len) {
    std::vector<ComplexMatrix> next;
    next.reserve(branches.size() * 2);
    for (std::size_t v = 0; v < branches.size(); ++v) {
      const Stage& node = nodes.at(prefix_string(v, len));
      for (int b = 0; b < 2; ++b) {
        const ComplexMatrix& e = node.ops[static_cast<std::size_t>(b)];
        ComplexMatrix out = e * branches[v] * e.adjoint();
        if (noise != nullptr) out = apply_stage(*noise, out);
        next.push_back(std::move(out));
      }
    }
    branches = std::move(next);
  }
  return branches;
}

}  // namespace

std::vector<ComplexMatrix> execute_plan(const TreePlan& plan, const ComplexMatrix& rho,
                                        const KrausChannel* layer_noise) {
  plan.validate();
  const int n = static_cast<int>(rho.rows());
  require(rho.cols() == n, ErrorKind::NotSquare, "execute_plan: state must be square");
  const std::map<std::string, Stage> nodes = tree_pairs(plan, n);
  std::optional<Stage> noise;
  if (layer_noise != nullptr) {
    require(layer_noise->dim() == n, ErrorKind::DimensionMismatch, "execute_plan: noise dimension");
    noise.emplace(layer_noise->ops());
  }
  return run_tree_branches(nodes, plan.layers, noise ? &*noise : nullptr, rho);
}

std::vector<ComplexMatrix> evolve_exact(const std::vector<Step>& protocol, const TrajectoryConfig& cfg,
                                        const NoiseModel& noise, const ComplexMatrix& rho0) {
  cfg.validate();
  noise.validate();
  require(rho0.rows() == cfg.dim && rho0.cols() == cfg.dim, ErrorKind::DimensionMismatch,
          "evolve_exact: initial state dimension differs from the truncation");
  const std::vector<Action> actions = compile(protocol, cfg, noise);
  std::vector<ComplexMatrix> out{rho0};
  ComplexMatrix rho = rho0;
  for (int c = 0; c < cfg.n_steps; ++c) {
    for (const Action& act : actions) {
      if (act.fixed) {
        rho = apply_stage(*act.fixed, rho);
      } else {
        const auto& ts = *act.tree;
        const auto branches = run_tree_branches(ts.nodes, ts.layers, ts.noise ? &*ts.noise : nullptr, rho);
        rho.setZero();
        for (const auto& b : branches) rho += b;
      }
    }
    rho = 0.5 * (rho + rho.adjoint());
    out.push_back(rho);
  }
  return out;
}

// --- ensemble engine ---------------------------------------------------------------------

EnsembleResult run_ensemble(const std::vector<Step>& protocol, const TrajectoryConfig& cfg,
                            const NoiseModel& noise, const DensityMatrix& rho0) {
  cfg.validate();
  noise.validate();
  require(rho0.dim() == cfg.dim, ErrorKind::DimensionMismatch,
          "run_ensemble: initial state dimension differs from the truncation");
  const std::vector<Action> actions = compile(protocol, cfg, noise);
  const int n = cfg.dim;
  const int points = cfg.n_steps + 1;
  const std::size_t n_obs = cfg.observables.size();

  // Mixed initial states are unravelled over their eigenbasis.
  const EigenDecomposition init = eig_hermitian(rho0.mat());
  std::vector<double> init_cdf;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < init.eigenvalues.size(); ++i) {
    acc += std::max(init.eigenvalues(i), 0.0);
    init_cdf.push_back(acc);
  }
  const bool pure_start = (init.eigenvalues.array() > 1e-12).count() == 1;

  auto run_one = [&](std::uint64_t index, Accumulator& out) {
    TrajectoryRecord rec;
    rec.seed = stream_seed(cfg.seed, index);
    std::mt19937_64 rng(rec.seed);
    Eigen::Index start = init.eigenvalues.size() - 1;
    if (!pure_start) {
      const double r = uniform01(rng) * acc;
      start = 0;
      while (start + 1 < init.eigenvalues.size() && r >= init_cdf[static_cast<std::size_t>(start)]) ++start;
    }
    ComplexVector psi = init.eigenvectors.col(start);

    auto record = [&](int c) {
      const auto cu = static_cast<std::size_t>(c);
      out.rho[cu].noalias() += psi * psi.adjoint();
      const RealVector p = psi.cwiseAbs2();
      out.pop[cu] += p;
      out.pop_sq[cu] += p.cwiseAbs2();
      for (std::size_t k = 0; k < n_obs; ++k) {
        const double v = psi.dot(cfg.observables[k] * psi).real();
        out.obs[cu](static_cast<Eigen::Index>(k)) += v;
        out.obs_sq[cu](static_cast<Eigen::Index>(k)) += v * v;
      }
      if (cfg.keep_records) rec.populations.push_back(p);
    };

    record(0);
    for (int c = 0; c < cfg.n_steps; ++c) {
      std::vector<int> outcomes;
      for (const Action& act : actions) {
        if (act.fixed) {
          outcomes.push_back(sample_stage(*act.fixed, psi, uniform01(rng)));
          continue;
        }
        const auto& ts = *act.tree;
        std::string prefix;
        for (int len = 0; len < ts.layers; ++len) {
          const int b = sample_stage(ts.nodes.at(prefix), psi, uniform01(rng));
          outcomes.push_back(b);
          prefix.push_back(b == 0 ? '0' : '1');
          if (ts.noise) sample_stage(*ts.noise, psi, uniform01(rng));
        }
      }
      record(c + 1);
      if (cfg.keep_records) rec.outcomes.push_back(std::move(outcomes));
    }
    ++out.count;
    if (cfg.keep_records) out.records.push_back(std::move(rec));
  };

  const int n_chunks = (cfg.ensemble + kChunk - 1) / kChunk;
  std::vector<std::optional<Accumulator>> chunks(static_cast<std::size_t>(n_chunks));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      if (failed.load()) return;
      const int c = next.fetch_add(1);
      if (c >= n_chunks) return;
      // The first chunk always runs so an interrupted ensemble is never empty.
      if (c > 0 && cancel_requested()) return;
      try {
        Accumulator local(points, n, n_obs);
        const int lo = c * kChunk;
        const int hi = std::min(cfg.ensemble, lo + kChunk);
        for (int i = lo; i < hi; ++i) run_one(static_cast<std::uint64_t>(i), local);
        chunks[static_cast<std::size_t>(c)].emplace(std::move(local));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max(1, n_chunks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  Accumulator total(points, n, n_obs);
  bool missing = false;
  for (auto& ch : chunks) {
    if (ch) {
      total.add(*ch);
    } else {
      missing = true;
    }
  }

  EnsembleResult res;
  res.completed = total.count;
  res.interrupted = missing;
  const double m = total.count;
  for (int c = 0; c < points; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    res.times.push_back(c * cfg.t_int);
    ComplexMatrix rho = total.rho[cu] / m;
    res.mean_state.push_back(0.5 * (rho + rho.adjoint()));
    const RealVector mean = total.pop[cu] / m;
    res.mean_populations.push_back(mean);
    const RealVector var = (total.pop_sq[cu] / m - mean.cwiseAbs2()).cwiseMax(0.0);
    res.stderr_populations.push_back((var / std::max(m - 1.0, 1.0)).cwiseSqrt());
    const RealVector omean = total.obs[cu] / m;
    res.observable_mean.push_back(omean);
    const RealVector ovar = (total.obs_sq[cu] / m - omean.cwiseAbs2()).cwiseMax(0.0);
    res.observable_stderr.push_back((ovar / std::max(m - 1.0, 1.0)).cwiseSqrt());
  }
  res.records = std::move(total.records);
  return res;
}

// --- fitting -------------------------------------------------------------------------------

DecayFit fit_exp_decay(const std::vector<double>& times, const std::vector<double>& values, double floor) {
  require(times.size() == values.size(), ErrorKind::FitFailed, "fit: times and values differ in length");
  require(times.size() >= 4, ErrorKind::FitFailed, "fit: need at least 4 points");
  for (double v : values)
    require(std::isfinite(v) && v >= floor - 0.05 && v <= 1.05, ErrorKind::FitFailed,
            "fit: value outside [floor - 0.05, 1.05]");
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double r = values[i] - floor;
    if (!(r > 0.0)) continue;
    const double w = r * r;
    const double y = std::log(r);
    sw += w;
    sx += w * times[i];
    sy += w * y;
    sxx += w * times[i] * times[i];
    sxy += w * times[i] * y;
    ++used;
  }
  require(used >= 2, ErrorKind::FitFailed, "fit: fewer than two points above the floor");
  const double det = sw * sxx - sx * sx;
  require(det > 0.0, ErrorKind::FitFailed, "fit: degenerate time grid");
  const double slope = (sw * sxy - sx * sy) / det;
  const double intercept = (sy - slope * sx) / sw;
  DecayFit fit;
  fit.amplitude = std::exp(intercept);
  fit.t1 = slope < 0.0 ? std::min(-1.0 / slope, kT1Overflow) : kT1Overflow;
  return fit;
}

// --- stabilization ---------------------------------------------------------------------------

namespace {

constexpr int kCodeDim = 4;
constexpr int kCode[2] = {1, 3};

ComplexMatrix encode(const ComplexMatrix& q) {
  ComplexMatrix r = ComplexMatrix::Zero(kCodeDim, kCodeDim);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(kCode[i], kCode[j]) = q(i, j);
  return r;
}

// Code block of a 4-level state with the leaked weight restored as I/2.
ComplexMatrix decode(const ComplexMatrix& rho) {
  ComplexMatrix q(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) q(i, j) = rho(kCode[i], kCode[j]);
  const cplx leak = rho.trace() - q.trace();
  q += 0.5 * leak * ComplexMatrix::Identity(2, 2);
  return q;
}

}  // namespace

StabilizationResult stabilization_experiment(const StabilizationConfig& cfg, const NoiseModel& noise) {
  require(cfg.t_int > 0.0 && cfg.t_max > 0.0, ErrorKind::BadParameter, "stabilization: t_int, t_max > 0");
  require(cfg.ensemble >= 0, ErrorKind::BadParameter, "stabilization: ensemble must be >= 0");
  noise.validate();
  const OperatorBasis basis = build_basis(2);
  const std::vector<ComplexMatrix> inputs = default_tomography_inputs(2);
  const int cycles = static_cast<int>(std::llround(cfg.t_max / cfg.t_int));
  int stride = 1;
  if (cfg.probe_interval > 0.0) stride = std::max(1, static_cast<int>(std::llround(cfg.probe_interval / cfg.t_int)));

  std::vector<Step> protocol;
  if (cfg.stabilize) {
    protocol.push_back(Step::make_channel(named_channel(NamedChannelId::odd_parity())));
  } else {
    protocol.push_back(Step::make_idle());
  }
  TrajectoryConfig tc;
  tc.dim = kCodeDim;
  tc.t_int = cfg.t_int;
  tc.n_steps = cycles;
  tc.seed = cfg.seed;
  tc.ensemble = std::max(cfg.ensemble, 1);
  tc.threads = cfg.threads;

  // Fidelity is linear in the four 4-level outputs: F = sum_k Tr(L_k rho_k).
  // Probing with matrix units recovers the L_k so standard errors follow from
  // per-trajectory expectation values.
  auto fidelity_of = [&](const std::vector<ComplexMatrix>& outputs4) {
    std::vector<ComplexMatrix> outs;
    for (const auto& o : outputs4) outs.push_back(decode(o));
    return chi_identity_fidelity(process_tomography_from_outputs(inputs, outs, basis));
  };
  std::vector<ComplexMatrix> weights(inputs.size(), ComplexMatrix::Zero(kCodeDim, kCodeDim));
  {
    const std::vector<ComplexMatrix> zeros(inputs.size(), ComplexMatrix::Zero(kCodeDim, kCodeDim));
    const double base = fidelity_of(zeros);
    require(std::abs(base) < 1e-12, ErrorKind::InvalidProtocol, "fidelity functional is not linear");
    for (std::size_t k = 0; k < inputs.size(); ++k)
      for (int a = 0; a < kCodeDim; ++a)
        for (int b = 0; b < kCodeDim; ++b) {
          std::vector<ComplexMatrix> probe = zeros;
          probe[k](a, b) = 1.0;
          const double re = fidelity_of(probe);
          probe[k](a, b) = kI;
          const double im = fidelity_of(probe);
          // Re Tr(L E_ab) = re and Re Tr(L i E_ab) = im determine L_ba.
          weights[k](b, a) = cplx(re, -im);
        }
    for (auto& w : weights) w = 0.5 * (w + w.adjoint());
  }

  StabilizationResult res;
  std::vector<std::vector<ComplexMatrix>> per_point(static_cast<std::size_t>(cycles + 1));
  std::vector<double> var(static_cast<std::size_t>(cycles + 1), 0.0);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const ComplexMatrix rho0 = encode(inputs[k]);
    if (cfg.ensemble == 0) {
      const auto states = evolve_exact(protocol, tc, noise, rho0);
      for (int c = 0; c <= cycles; ++c) per_point[static_cast<std::size_t>(c)].push_back(states[static_cast<std::size_t>(c)]);
      continue;
    }
    tc.observables = {weights[k]};
    tc.seed = cfg.seed + 7919ULL * k;
    const EnsembleResult er = run_ensemble(protocol, tc, noise, DensityMatrix(rho0));
    res.interrupted = res.interrupted || er.interrupted;
    for (int c = 0; c <= cycles; ++c) {
      const auto cu = static_cast<std::size_t>(c);
      per_point[cu].push_back(er.mean_state[cu]);
      var[cu] += er.observable_stderr[cu](0) * er.observable_stderr[cu](0);
    }
  }
  for (int c = 0; c <= cycles; c += stride) {
    const auto cu = static_cast<std::size_t>(c);
    res.times.push_back(c * cfg.t_int);
    res.fidelity.push_back(fidelity_of(per_point[cu]));
    res.stderr_fidelity.push_back(std::sqrt(var[cu]));
  }
  res.fit = fit_exp_decay(res.times, res.fidelity, 0.25);
  return res;
}

std::vector<SweepPoint> interval_sweep(const std::vector<double>& intervals,
                                       const StabilizationConfig& base, const NoiseModel& noise) {
  std::vector<SweepPoint> out;
  for (double t : intervals) {
    require(t > 0.0, ErrorKind::BadParameter, "interval_sweep: intervals must be positive");
    StabilizationConfig cfg = base;
    cfg.t_int = t;
    cfg.stabilize = true;
    const StabilizationResult r = stabilization_experiment(cfg, noise);
    out.push_back({t, r.fit.t1});
    if (r.interrupted || cancel_requested()) break;
  }
  return out;
}

// --- Zeno blockade ------------------------------------------------------------------------------

ZenoResult zeno_experiment(double kappa, const ZenoConfig& cfg, const NoiseModel& noise) {
  require(cfg.dim >= 10, ErrorKind::BadParameter, "zeno: truncation must be at least 10");
  require(kappa >= 0.0 && cfg.t_int > 0.0 && cfg.t_max > 0.0, ErrorKind::BadParameter,
          "zeno: kappa >= 0, t_int > 0 and t_max > 0 required");
  require(cfg.ensemble >= 0, ErrorKind::BadParameter, "zeno: ensemble must be >= 0");
  const int cycles = static_cast<int>(std::llround(cfg.t_max / cfg.t_int));
  std::vector<Step> protocol{
      Step::make_displace(cfg.alpha),
      Step::make_channel(named_channel(NamedChannelId::tpd(kappa * cfg.t_int))),
  };
  TrajectoryConfig tc;
  tc.dim = cfg.dim;
  tc.t_int = cfg.t_int;
  tc.n_steps = cycles;
  tc.seed = cfg.seed;
  tc.ensemble = std::max(cfg.ensemble, 1);
  tc.threads = cfg.threads;
  const ComplexMatrix rho0 = DensityMatrix::basis_state(cfg.dim, 0).mat();

  std::vector<ComplexMatrix> states;
  ZenoResult res;
  if (cfg.ensemble == 0) {
    states = evolve_exact(protocol, tc, noise, rho0);
  } else {
    EnsembleResult er = run_ensemble(protocol, tc, noise, DensityMatrix(rho0));
    res.interrupted = er.interrupted;
    states = std::move(er.mean_state);
  }
  for (int c = 0; c <= cycles; ++c) {
    const ComplexMatrix& rho = states[static_cast<std::size_t>(c)];
    RealVector p(7);
    for (int k = 0; k < 6; ++k) p(k) = rho(k, k).real();
    p(6) = std::max(0.0, 1.0 - p.head(6).sum());
    res.times.push_back(c * cfg.t_int);
    res.populations.push_back(p);
  }
  for (double t : cfg.snapshot_times) {
    const long long c = std::llround(t / cfg.t_int);
    if (c < 0 || c > cycles) continue;
    res.snapshots.emplace_back(c * cfg.t_int, states[static_cast<std::size_t>(c)]);
  }
  return res;
}

}  // namespace aquo
