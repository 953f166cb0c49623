#pragma once

#include "fsplan/sim/geometry.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace fsplan::sim {

inline constexpr int kHorizon = 23;
inline constexpr int kNoiseDim = 4;
inline constexpr int kNoiseLength = kHorizon * kNoiseDim;  // 92
inline constexpr int kStateDim = 8;

using Vec4 = Eigen::Vector4d;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using NoiseSequence = Eigen::Matrix<double, kHorizon, kNoiseDim, Eigen::RowMajor>;

/// Deterministic per-item generator derived from (root seed, index).
std::mt19937_64 derive_rng(std::uint64_t root_seed, std::uint64_t index);
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double route_progress = 0.0;

  Vec2 position() const { return {x, y}; }
  Vec2 velocity() const { return {vx, vy}; }
  double speed() const { return std::hypot(vx, vy); }
  Vec4 kinematics() const { return {x, y, vx, vy}; }
};

struct JointState {
  VehicleState ego;
  VehicleState intruder;
};

/// Ego spawns South. Intruder spawn and both destinations are legal when
/// spawn != destination.
struct Scenario {
  Branch intruder_spawn = Branch::South;
  Branch intruder_destination = Branch::North;
  Branch ego_destination = Branch::North;
  double intruder_idm_delta = 4.0;

  static constexpr Branch kEgoSpawn = Branch::South;
  void validate() const;
};

struct IdmParams {
  double desired_speed = 0.5;
  double max_accel = 0.1;
  double comfort_decel = 0.2;
  double hard_decel = 0.5;
  double min_gap = 0.01;
  double headway = 1.0;
  double delta = 4.0;
};

/// Treiber IDM with the interaction term s* = s0 + max(0, vT + v*dv/(2 sqrt(a b))),
/// clamped to [-hard_decel, max_accel]. Pass gap = +inf for a free road.
double idm_acceleration(double speed, double gap, double closing_speed, const IdmParams& p);

/// How a vehicle turns a (possibly noisy) kinematic estimate of the other
/// vehicle into an IDM leader.
struct InteractionParams {
  double follow_length = 0.04;   // bumper-to-bumper allowance for same-path following
  double same_path_lateral = 0.03;
  double clearance = 0.05;       // stop this far short of a conflict zone
  double lookahead = 4.0;        // ignore vehicles further than this many steps from the zone
  // Yield when the other vehicle's arrival time is below ours + margin. The
  // ego and intruder use opposite signs so that exactly one of them yields.
  double priority_margin = 0.5;
  double eta_speed_floor = 0.05;
};

struct LeaderInput {
  double gap = std::numeric_limits<double>::infinity();
  double closing_speed = 0.0;
};

/// Leader seen by a vehicle on `own_route`: the other vehicle itself when it
/// sits on our path ahead, or a stop point before a conflict zone shared with
/// `other_route` when the other vehicle has priority there.
LeaderInput perceive_leader(const Route& own_route, const VehicleState& self, const Vec4& other,
                            const Route& other_route, const std::vector<ConflictZone>& zones,
                            const InteractionParams& p);

struct SpawnRanges {
  double ego_distance_lo = 0.35, ego_distance_hi = 0.65;
  double ego_speed_lo = 0.35, ego_speed_hi = 0.5;
  double intruder_distance_lo = 0.25, intruder_distance_hi = 0.45;
  double intruder_speed_lo = 0.35, intruder_speed_hi = 0.45;
  double delta_lo = 3.5, delta_hi = 4.5;
  double min_initial_separation = 0.1;
};

struct SimConfig {
  double lane_width = 0.04;
  double branch_length = 12.0;
  double gamma = 1.0 / 0.15;  // prior noise covariance scale: eps ~ N(0, gamma I)
  double noise_scale = 1.0;   // desk-scale multiplier on gamma
  double collision_radius_sum = 0.03;
  int substeps = 8;
  IdmParams ego_idm{};
  IdmParams intruder_idm{};
  InteractionParams ego_interaction{};
  InteractionParams intruder_interaction{.priority_margin = -0.5};
  SpawnRanges spawn{};

  double noise_variance() const { return gamma * noise_scale; }
  double noise_std() const;
  void validate() const;
};

struct InitialState {
  VehicleState ego;
  VehicleState intruder;

  Vec8 as_vector() const;
};

struct SimOutcome {
  std::vector<JointState> trajectory;  // one snapshot per timestep from start_t to 23
  double robustness = 0.0;
  bool collided = false;
  int start_t = 0;
};

/// Ego controller: along-route acceleration from its own exact state and the
/// noisy intruder observation.
using EgoPolicy = std::function<double(const VehicleState& ego, const Vec4& observation, int t)>;

class Simulator {
 public:
  explicit Simulator(SimConfig config);

  const SimConfig& config() const { return config_; }
  const WorldGeometry& world() const { return world_; }

  const Route& ego_route(const Scenario& sc) const {
    return world_.route(Scenario::kEgoSpawn, sc.ego_destination);
  }
  const Route& intruder_route(const Scenario& sc) const {
    return world_.route(sc.intruder_spawn, sc.intruder_destination);
  }
  /// Conflict zones of route (from_a, to_a) against route (from_b, to_b).
  const std::vector<ConflictZone>& conflicts(Branch from_a, Branch to_a, Branch from_b,
                                             Branch to_b) const;

  /// Vehicle placed on `route` at `distance` from the center, moving along it.
  VehicleState place_on_route(const Route& route, double progress, double speed) const;
  /// Snap an arbitrary kinematic estimate onto a route (projection + tangential speed).
  VehicleState snap_to_route(const Route& route, const Vec4& kin) const;

  /// Random scenario whose intruder spawns on `spawn`.
  Scenario sample_scenario(Branch spawn, std::mt19937_64& rng) const;
  InitialState sample_initial_state(const Scenario& sc, std::mt19937_64& rng) const;
  NoiseSequence sample_prior_noise(std::mt19937_64& rng) const;

  /// Along-route forward-Euler step: s += v dt + a dt^2 / 2, v += a dt. Speed
  /// saturates at zero and at the route end.
  VehicleState step_along_route(const Route& route, const VehicleState& s, double accel,
                                double dt = 1.0) const;
  /// Free point-mass step used by the planner-controlled ego.
  VehicleState step_point_mass(const VehicleState& s, const Vec2& accel, double dt = 1.0) const;
  /// Position along the step at fraction tau in [0,1].
  Vec2 along_route_at(const Route& route, const VehicleState& s, double accel, double tau) const;
  Vec2 point_mass_at(const VehicleState& s, const Vec2& accel, double tau) const;

  JointState step(const Scenario& sc, const JointState& state, double ego_accel,
                  double intruder_accel, double dt = 1.0) const;

  static Vec4 observe(const VehicleState& true_intruder, const Vec4& noise) {
    return true_intruder.kinematics() + noise;
  }

  double ego_idm(const Scenario& sc, const VehicleState& ego, const Vec4& intruder_estimate) const;
  /// Ego IDM against an intruder assumed to drive toward `intruder_destination`.
  double ego_idm_against(const Scenario& sc, Branch intruder_destination, const VehicleState& ego,
                         const Vec4& intruder_estimate) const;
  double intruder_idm(const Scenario& sc, const VehicleState& intruder, const VehicleState& ego) const;
  EgoPolicy idm_policy(const Scenario& sc) const;

  /// Separation clipped at zero: max(0, |p_ego - p_intr| - radius_sum).
  double separation(const Vec2& ego, const Vec2& intruder) const;

  /// Closed loop from `start_t` to the horizon with noise rows 0..(23-start_t-1).
  SimOutcome run(const Scenario& sc, const InitialState& s0, const NoiseSequence& noise,
                 const EgoPolicy& ego_policy, int start_t = 0) const;
  SimOutcome run_idm(const Scenario& sc, const InitialState& s0, const NoiseSequence& noise,
                     int start_t = 0) const {
    return run(sc, s0, noise, idm_policy(sc), start_t);
  }

  /// Distance of the ego to the center along the South approach (0 once past it).
  static double ego_distance_to_intersection(const VehicleState& ego);
  bool ego_reached_destination(const Scenario& sc, const VehicleState& ego,
                               double min_distance = 0.1) const;

 private:
  SimConfig config_;
  WorldGeometry world_;
  std::vector<std::vector<ConflictZone>> conflicts_;  // 16 x 16 route slots
};

/// Minimum clipped separation over a sequence of joint positions.
double robustness(const std::vector<JointState>& states, double radius_sum);

}  // namespace fsplan::sim
