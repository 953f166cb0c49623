#pragma once

#include "fsplan/sim/simulation.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

namespace fsplan::metrics {

/// Points stored one per row.
using Points = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Label : std::uint8_t { Real, Generated };

struct FeatureSet {
  Points points;
  Label label = Label::Real;
};

double failure_rate(const std::vector<sim::SimOutcome>& outcomes);

/// Squared Euclidean distance, accumulated coordinate by coordinate.
double squared_distance(const double* a, const double* b, Eigen::Index dim);

/// Squared distance from each real point to its k-th nearest other real point.
std::vector<double> knn_radii_squared(const Points& real, int k);

/// (1/(kM)) * sum over fake j, real i of [fake_j inside the k-NN ball of real_i].
double density(const FeatureSet& real, const FeatureSet& fake, int k = 5);
/// Share of real points whose k-NN ball holds at least one fake point.
double coverage(const FeatureSet& real, const FeatureSet& fake, int k = 5);

struct DensityCoverage {
  double density = 0.0;
  double coverage = 0.0;
};
/// Both metrics from one pass over the pairwise distances.
DensityCoverage density_coverage(const FeatureSet& real, const FeatureSet& fake, int k = 5);

struct ZTest {
  double z = 0.0;
  double p = 0.5;          // upper tail: evidence that group 1's rate exceeds group 2's
  bool degenerate = false;  // pooled variance was zero
};
ZTest two_proportion_z(long successes1, long n1, long successes2, long n2);

/// Intruder minus ego position and velocity for snapshots 1..23, flattened
/// step-major (92 values).
Eigen::VectorXd trajectory_features(const sim::SimOutcome& outcome);
Points feature_matrix(const std::vector<sim::SimOutcome>& outcomes);

/// Per-dimension standardization fitted on a reference set; dimensions with
/// zero spread keep unit scale.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer fit(const Points& reference);
  Points apply(const Points& p) const;
};

struct MetricsRow {
  std::string scenario;
  std::string model;
  double failure_rate = 0.0;
  double density = 0.0;
  double coverage = 0.0;
};

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows);

}  // namespace fsplan::metrics
