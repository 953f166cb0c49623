#pragma once

#include <Eigen/Core>

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fsplan::sim {

using Vec2 = Eigen::Vector2d;

enum class Branch : std::uint8_t { East = 0, West = 1, South = 2, North = 3 };

inline constexpr std::array<Branch, 4> kAllBranches{Branch::East, Branch::West, Branch::South,
                                                    Branch::North};

std::string_view to_string(Branch b);
std::optional<Branch> parse_branch(std::string_view name);

/// Unit vector pointing from the intersection center out along the branch.
Vec2 outward(Branch b);

/// Right-hand normal of a travel direction.
inline Vec2 right_of(const Vec2& dir) { return {dir.y(), -dir.x()}; }

/// Piecewise-linear route with arc-length parameterization.
class Route {
 public:
  struct Projection {
    double progress = 0.0;
    double lateral = 0.0;  // unsigned distance to the polyline
  };

  struct Crossing {
    double progress = 0.0;  // arc length on this route
    double ray_distance = 0.0;
  };

  Route() = default;
  explicit Route(std::vector<Vec2> vertices);

  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  std::span<const Vec2> vertices() const { return vertices_; }
  std::size_t segment_count() const { return vertices_.empty() ? 0 : vertices_.size() - 1; }

  Vec2 position_at(double s) const;
  Vec2 tangent_at(double s) const;
  Projection project(const Vec2& p) const;

  /// First point, strictly ahead of `from_progress`, where the ray origin + r*dir
  /// (r >= 0, dir unit) crosses the centerline.
  std::optional<Crossing> first_crossing(const Vec2& origin, const Vec2& dir,
                                         double from_progress) const;

 private:
  std::size_t segment_index(double s) const;

  std::vector<Vec2> vertices_;
  std::vector<double> cumulative_;
};

/// Stretch where two route centerlines run within a lateral threshold of
/// each other, expressed as arc-length intervals on both routes.
struct ConflictZone {
  double own_in = 0.0;
  double own_out = 0.0;
  double other_in = 0.0;
  double other_out = 0.0;
  bool shared_start = false;  // both routes begin on the same lane
};

std::vector<ConflictZone> find_conflict_zones(const Route& own, const Route& other,
                                              double lateral_threshold, double resolution = 0.0025);

/// Four-way intersection centered at the origin, two lanes per branch,
/// right-hand traffic. Routes start `branch_length` from the center on the
/// incoming lane and end `branch_length` out on the outgoing lane.
class WorldGeometry {
 public:
  WorldGeometry(double lane_width, double branch_length);

  double lane_width() const { return lane_width_; }
  double branch_length() const { return branch_length_; }

  bool has_route(Branch from, Branch to) const { return from != to; }
  const Route& route(Branch from, Branch to) const;
  std::size_t route_count() const;

  /// Point on the incoming lane of `b` at the given distance from the center.
  Vec2 spawn_point(Branch b, double distance_to_center) const;
  /// Route progress for a vehicle spawned at the given distance on its incoming lane.
  double spawn_progress(double distance_to_center) const { return branch_length_ - distance_to_center; }

  /// Signed distance to the center along the branch axis (positive while on the branch side).
  static double axial_distance(Branch b, const Vec2& p) { return outward(b).dot(p); }

  /// Lateral offset of the incoming (toward-center) lane of `b`.
  Vec2 incoming_offset(Branch b) const;
  /// Lateral offset of the outgoing lane of `b`.
  Vec2 outgoing_offset(Branch b) const;

  /// True when `p` lies on branch `b` (within the road width) at least
  /// `min_distance` out from the center.
  bool on_branch(Branch b, const Vec2& p, double min_distance) const;

 private:
  double lane_width_;
  double branch_length_;
  std::array<std::array<Route, 4>, 4> routes_;
};

/// Throws std::invalid_argument on non-positive dimensions.
WorldGeometry build_world(double lane_width, double branch_length);

}  // namespace fsplan::sim
