#pragma once

#include "fsplan/diffusion/diffusion.hpp"
#include "fsplan/lp/solver.hpp"
#include "fsplan/sim/simulation.hpp"

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

namespace fsplan::planner {

using sim::Vec2;
using sim::Vec4;

/// Noise sequences for `count` failure samples conditioned on one state.
using FailureSampler =
    std::function<std::vector<sim::NoiseSequence>(const diffusion::Conditioning&, int count, std::mt19937_64&)>;

/// Student (or teacher) at rho_threshold = 0.
FailureSampler model_sampler(const diffusion::DenoiserModel& model);

struct FailureSampleSet {
  int t = 0;
  // states[i][0] is the observation o_t, states[i][k] the intruder at t + k.
  std::vector<std::vector<Vec4>> states;
  std::vector<double> robustness;

  int size() const { return static_cast<int>(states.size()); }
  /// Intruder position of sample i at absolute timestep `step` (t < step <= 23).
  Vec2 position(int i, int step) const;
};

/// Draws n_prime noise sequences at the observed state, simulates each from
/// `t` with both vehicles under IDM, and keeps the n lowest-robustness ones
/// (stable in sampling order).
FailureSampleSet generate_failure_set(const sim::Simulator& sim, const sim::Scenario& sc,
                                      const sim::VehicleState& ego, const Vec4& observation, int t,
                                      const FailureSampler& sampler, int n_prime, int n, std::mt19937_64& rng);

struct Box {
  Vec2 lo = Vec2::Constant(-lp::kInf);
  Vec2 hi = Vec2::Constant(lp::kInf);

  bool contains(const Vec2& p, double tol = 0.0) const;
  Box intersect(const Box& o) const;
  Box hull(const Box& o) const;
};

/// Ego lane region: union of the incoming and outgoing lane rectangles (the
/// same rectangle for a straight route), plus the terminal box.
struct LaneRegion {
  Box incoming;
  Box outgoing;
  Box terminal;

  bool straight() const;
  bool contains(const Vec2& p, double tol = 0.0) const;
};

LaneRegion lane_region(const sim::Simulator& sim, const sim::Scenario& sc, double terminal_distance = 0.1);

struct PlanLimits {
  double v_forward = 0.5;
  double v_retrograde = 1e-3;
  double ax_lo = -0.2, ax_hi = 0.1;
  double ay_lo = -0.2, ay_hi = 1.0;
  double mean_speed_x = 0.4;
  double mean_speed_y = 0.3;
};

/// Per-axis velocity interval: forward along the axis the route travels,
/// retrograde against it; +-retrograde on an axis the route never uses.
struct VelocityBox {
  Vec2 lo, hi;
};
VelocityBox velocity_box(const sim::Scenario& sc, const PlanLimits& lim);

/// Column layout of the planning program for a horizon of H steps.
struct PlanLayout {
  int H = 0;
  int px(int i) const { return 8 * (i - 1) + 0; }  // i = 1..H
  int py(int i) const { return 8 * (i - 1) + 1; }
  int vxp(int i) const { return 8 * (i - 1) + 2; }
  int vxm(int i) const { return 8 * (i - 1) + 3; }
  int vyp(int i) const { return 8 * (i - 1) + 4; }
  int vym(int i) const { return 8 * (i - 1) + 5; }
  int ax(int i) const { return 8 * i + 6; }  // i = 0..H-1, stored in slot i+1
  int ay(int i) const { return 8 * i + 7; }
  int m() const { return 8 * H; }
};

// Separation at fraction sub / substeps of step `step` (1..H) against `sample`.
// The ego follows its point-mass arc within the step, the sample the chord
// between its two recorded positions.
struct TermKey {
  int step = 0;
  int sample = 0;
  int sub = 1;
  auto operator<=>(const TermKey&) const = default;
};

struct PlanProblem {
  lp::MilpProblem milp;
  PlanLayout layout;
  int t = 0;
  Vec2 p0, v0;
  int substeps = 1;
  std::vector<int> lane_binary;  // per step i = 1..H-1 (0 incoming, 1 outgoing), -1 when unused
  struct Term {
    TermKey key;
    int sign_x = 0;  // fixed sign of px - fx, 0 when a binary decides it
    int sign_y = 0;
    int bx = -1, by = -1;  // sign binary columns
    int ux = -1, uy = -1;  // per-axis distance columns, paired with the binaries
  };
  std::vector<Term> terms;
  double m_upper = 0.0;
};

struct PlanOptions {
  PlanLimits limits{};
  // Separation terms enter the program lazily; false builds all of them.
  bool lazy = true;
  // Fix orthant signs that the reachable set already decides.
  bool fix_signs = true;
  lp::BranchAndBoundOptions bnb{};
  // Branch-and-bound nodes per plan over all lazy rounds. When it runs out the
  // best plan found so far comes back with status IterationLimit.
  long node_budget = 300;
  // Separation checkpoints per step; 1 checks the waypoints only.
  int substeps = 1;
};

/// Max-min L1 separation program. `terms` lists the checkpoints to include;
/// empty means all of them. On a turning route the waypoints occupy
/// the incoming rectangle, then the outgoing one (either on their overlap).
PlanProblem build_plan_milp(const sim::VehicleState& ego, const FailureSampleSet& fset, int t,
                            const LaneRegion& region, const VelocityBox& vbox, const PlanLimits& lim,
                            const std::vector<TermKey>& terms = {}, bool fix_signs = true, int substeps = 1);

struct PlanSolution {
  lp::SolveStatus status = lp::SolveStatus::Infeasible;
  std::vector<Vec2> actions;    // a_t .. a_22
  std::vector<Vec2> waypoints;  // p_{t+1} .. p_23
  std::vector<Vec2> velocities;
  double objective = 0.0;
  long nodes = 0;
  int rounds = 0;
  int active_terms = 0;
  Vec2 start = Vec2::Zero();  // ego position the plan leaves from
  int substeps = 1;

  // Optimal, or cut short by the node budget with a feasible plan in hand.
  bool usable() const { return !actions.empty(); }
};

PlanSolution solve_plan(const sim::VehicleState& ego, const FailureSampleSet& fset, int t, const LaneRegion& region,
                        const VelocityBox& vbox, const PlanOptions& opt = {});

/// Largest violation of the plan against every program constraint, checked
/// directly on the waypoints (not through the LP rows).
double audit_plan(const PlanSolution& plan, const sim::VehicleState& ego, const FailureSampleSet& fset, int t,
                  const LaneRegion& region, const VelocityBox& vbox, const PlanLimits& lim);

/// Min over checkpoints and samples of the L1 separation along the plan.
double plan_separation(const PlanSolution& plan, const FailureSampleSet& fset, int t);

enum class BeliefSource : std::uint8_t { Observation, FailureSample };

struct BeliefFilter {
  Vec4 mu = Vec4::Zero();
  Eigen::Matrix4d sigma = Eigen::Matrix4d::Identity();
  BeliefSource source = BeliefSource::Observation;
  int sample = -1;

  static BeliefFilter diffuse(const Vec4& mean, double gamma, BeliefSource src, int sample = -1);
};

/// One predict/update cycle. The velocity block is reset to the observed
/// velocity with covariance gamma I.
BeliefFilter kalman_update(const BeliefFilter& f, const Vec4& obs, double gamma);

struct PolicyOptions {
  double eta = 0.08;
  int samples_per_filter = 10;
};

struct PolicyAction {
  double accel = 0.0;
  int plausible = 0;
  bool fallback = false;
};

/// States within eta of the observed position among `draws`.
std::vector<Vec4> plausible_states(const std::vector<Vec4>& draws, const Vec4& observation, double eta);

PolicyAction policy_phase_action(const sim::Simulator& sim, const sim::Scenario& sc, const sim::VehicleState& ego,
                                 const std::vector<BeliefFilter>& filters, const Vec4& observation,
                                 const PolicyOptions& opt, std::mt19937_64& rng);

struct PlannerConfig {
  int n_prime = 200;
  int n = 8;
  double cutoff = 0.35;
  double success_distance = 0.1;
  PolicyOptions policy{};
  PlanOptions plan{};
};

struct StepLog {
  int t = 0;
  bool planning = false;
  sim::JointState state;
  Vec4 observation = Vec4::Zero();
  double value = 0.0;  // plan objective, or the chosen IDM acceleration
  int plausible = 0;
  bool fallback = false;
};

struct RolloutResult {
  sim::SimOutcome outcome;
  bool failure = false;
  bool delayed = false;
  int plans = 0;
  int plan_fallbacks = 0;
  int plans_truncated = 0;
  std::vector<StepLog> log;
};

/// Closed loop of the robust planner against the IDM intruder with the given
/// observation noise.
RolloutResult run_robust_planner(const sim::Simulator& sim, const sim::Scenario& sc, const sim::InitialState& s0,
                                 const sim::NoiseSequence& noise, const FailureSampler& sampler,
                                 const PlannerConfig& cfg, std::mt19937_64& rng);

/// Reference IDM rollout with the same reporting.
RolloutResult run_idm_baseline(const sim::Simulator& sim, const sim::Scenario& sc, const sim::InitialState& s0,
                               const sim::NoiseSequence& noise, double success_distance = 0.1);

void write_rollout_csv(std::ostream& os, const RolloutResult& r);

}  // namespace fsplan::planner
