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

// Monte-Carlo trajectories of repeated protocols on a truncated cavity mode,
// a deterministic channel-composition oracle for the ensemble mean, an RK4
// master-equation integrator, and the stabilization and Zeno experiments.
//
// Times are in microseconds and rates in 1/us throughout.

#ifndef AQUO_TRAJECTORY_HPP
#define AQUO_TRAJECTORY_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "aquo/channel.hpp"
#include "aquo/tree.hpp"

namespace aquo {

inline constexpr double kCavityLifetimeUs = 143.0;
inline constexpr double kDefaultDepolP = 0.036;
/// Reported in place of T1 when a curve shows no decay.
inline constexpr double kT1Overflow = 1e9;

struct NoiseModel {
  double kappa_s = 1.0 / kCavityLifetimeUs;  // single-photon population decay rate
  double depol_p = kDefaultDepolP;              // after every operation
  bool apply_loss_during_interval = true;

  static NoiseModel none() { return {0.0, 0.0, false}; }
  void validate() const;
};

enum class StepKind { Channel, Tree, Displace, Idle };

/// One element of a protocol cycle. Each step applies cavity loss over its
/// duration, then its operation, then depolarization. Trees depolarize after
/// every layer.
struct Step {
  StepKind kind = StepKind::Idle;
  std::shared_ptr<const KrausChannel> channel;
  std::shared_ptr<const TreePlan> plan;
  cplx alpha{0.0, 0.0};
  std::optional<double> duration;  // defaults to the configured t_int
  bool depolarize = true;

  static Step make_channel(KrausChannel ch, bool depolarize = true,
                           std::optional<double> duration = std::nullopt);
  static Step make_tree(TreePlan plan, bool depolarize = true,
                        std::optional<double> duration = std::nullopt);
  /// Instantaneous and noiseless unless stated otherwise.
  static Step make_displace(cplx alpha, double duration = 0.0, bool depolarize = false);
  static Step make_idle(std::optional<double> duration = std::nullopt);
};

struct TrajectoryConfig {
  int dim = 4;               // truncation N
  double t_int = 12.5;       // cycle duration
  int n_steps = 1;           // protocol cycles
  std::uint64_t seed = 1;
  int ensemble = 1000;
  int threads = 0;           // 0 = hardware concurrency
  bool keep_records = false;
  /// Expectation values tracked per cycle with their standard errors.
  std::vector<ComplexMatrix> observables;
  void validate() const;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;                     // stream seed of this trajectory
  std::vector<std::vector<int>> outcomes;     // branch indices per cycle
  std::vector<RealVector> populations;        // after each cycle (index 0 = initial)
};

struct EnsembleResult {
  std::vector<double> times;                  // times[c] = elapsed time after c cycles
  std::vector<RealVector> mean_populations;
  std::vector<ComplexMatrix> mean_state;
  std::vector<RealVector> stderr_populations;
  std::vector<RealVector> observable_mean;     // [cycle](observable)
  std::vector<RealVector> observable_stderr;
  std::vector<TrajectoryRecord> records;     // only with keep_records
  int completed = 0;                          // trajectories merged
  bool interrupted = false;
};

/// Cooperative cancellation shared by all running ensembles; checked between
/// trajectory chunks. The first chunk of an ensemble always completes.
void request_cancel() noexcept;
void clear_cancel() noexcept;
bool cancel_requested() noexcept;

/// Stream seed for trajectory `index` of a run seeded with `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double uniform01(std::mt19937_64& rng) noexcept;

/// Branch j with cumulative probabilities of E_j rho E_j† renormalized to 1;
/// branches below 1e-12 are skipped.
std::pair<int, DensityMatrix> sample_jump(const KrausChannel& ch, const DensityMatrix& rho, double r);

/// Vector form used by the engine; psi is replaced by the normalized branch.
int sample_jump_pure(const std::vector<ComplexMatrix>& ops, ComplexVector& psi, double r);

/// exp(alpha a† - alpha* a) on N Fock levels. Throws TruncationTooSmall
/// unless |alpha|^2 < N / 4.
ComplexMatrix displacement_truncated(cplx alpha, int n);

/// Lowering operator on N levels.
ComplexMatrix lowering_operator(int n);

/// Exact finite-time loss: A_k[m - k, m] = sqrt(C(m, k)) eta^{(m-k)/2} (1 - eta)^{k/2}
/// with eta = exp(-kappa t).
KrausChannel amplitude_damping(int n, double kappa, double t);

/// Loss generator in the factor-2 convention: rate 1 / (2 T) on the lowering
/// operator gives population decay e^{-t/T}.
LindbladGenerator cavity_loss_generator(int n, double lifetime);

/// Classical RK4. Requires dt <= min(1e-3 / stiffness, t) and t an integer
/// multiple of dt.
DensityMatrix lindblad_rk4(const LindbladGenerator& gen, const DensityMatrix& rho0, double t,
                           double dt);

/// Branch states of an adaptive tree run on rho: entry k is the unnormalized
/// state after the path whose bits spell k. Each layer uses the complete pair
/// extracted from its dilation, embedded into rho's dimension; `layer_noise`
/// (if given) acts after every layer.
std::vector<ComplexMatrix> execute_plan(const TreePlan& plan, const ComplexMatrix& rho,
                                        const KrausChannel* layer_noise = nullptr);

/// Deterministic ensemble mean of the protocol: states after each cycle.
std::vector<ComplexMatrix> evolve_exact(const std::vector<Step>& protocol, const TrajectoryConfig& cfg,
                                        const NoiseModel& noise, const ComplexMatrix& rho0);

EnsembleResult run_ensemble(const std::vector<Step>& protocol, const TrajectoryConfig& cfg,
                            const NoiseModel& noise, const DensityMatrix& rho0);

// --- curve fitting ------------------------------------------------------------------

struct DecayFit {
  double amplitude = 0.0;
  double t1 = kT1Overflow;
};

/// A e^{-t/T1} + floor by log-linear regression with weights (v - floor)^2
/// on the points above the floor. A flat curve reports T1 = kT1Overflow.
DecayFit fit_exp_decay(const std::vector<double>& times, const std::vector<double>& values,
                       double floor);

// --- experiments --------------------------------------------------------------------

struct StabilizationConfig {
  double t_int = 12.5;
  double t_max = 450.0;
  double probe_interval = 0.0;  // 0 = every cycle
  bool stabilize = true;
  int ensemble = 2000;          // 0 = exact channel composition
  std::uint64_t seed = 1;
  int threads = 0;
};

struct StabilizationResult {
  std::vector<double> times;
  std::vector<double> fidelity;
  std::vector<double> stderr_fidelity;
  DecayFit fit;
  bool interrupted = false;
};

/// Process fidelity of the encoded qubit span{|1>, |3>} against the identity,
/// tracked over repeated cycles. Leakage out of the code block is returned to
/// it as the maximally mixed code state before tomography.
StabilizationResult stabilization_experiment(const StabilizationConfig& cfg, const NoiseModel& noise);

struct SweepPoint {
  double t_int = 0.0;
  double t1 = 0.0;
};

std::vector<SweepPoint> interval_sweep(const std::vector<double>& intervals,
                                       const StabilizationConfig& base, const NoiseModel& noise);

struct ZenoConfig {
  int dim = 10;
  double t_int = 2.0;
  double t_max = 100.0;
  cplx alpha{0.0, -0.1};
  int ensemble = 2000;  // 0 = exact
  std::uint64_t seed = 1;
  int threads = 0;
  std::vector<double> snapshot_times{16.0, 44.0, 100.0};
};

struct ZenoResult {
  std::vector<double> times;
  std::vector<RealVector> populations;  // p0..p5 followed by the remainder
  std::vector<std::pair<double, ComplexMatrix>> snapshots;
  bool interrupted = false;
};

/// kappa is the two-photon rate in 1/us (2 pi f for f in MHz).
ZenoResult zeno_experiment(double kappa, const ZenoConfig& cfg, const NoiseModel& noise);

}  // namespace aquo

#endif  // AQUO_TRAJECTORY_HPP
