#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "imf/path.hpp"

namespace imf {

enum class MomentMode { Absolute, Factorial };

/// Empirical structure functions S_q(T, t) (absolute mode) or S_[n](T, t)
/// (factorial mode) over non-overlapping blocks.
struct PartitionTable {
  MomentMode mode = MomentMode::Absolute;
  Eigen::VectorXd orders;
  Eigen::VectorXd block_sizes;
  /// Number of blocks floor(T / t) per block size.
  Eigen::VectorXi block_counts;
  /// stats(i, j) for orders[i], block_sizes[j]; NaN marks a missing entry.
  Eigen::MatrixXd stats;
  double total_length = 0.0;

  bool missing(Eigen::Index order_index, Eigen::Index block_index) const;
};

struct ScalingEstimate {
  double order = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
  int points_used = 0;
  double r_squared = 0.0;
};

/// Default block grid: dyadic multiples 4, 8, 16, ... of `grid_step` up to
/// total_length / 8, at most 20 sizes.
Eigen::VectorXd default_block_sizes(double grid_step, double total_length);

struct PartitionOptions {
  /// Largest factorial order accepted.
  int max_factorial_order = 8;
};

/// Throws NonUniformGrid, BlockMisaligned, NonIntegerIncrements, InvalidArgument.
PartitionTable partition_function(const SamplePath& path, const Eigen::VectorXd& orders,
                                  const Eigen::VectorXd& block_sizes, MomentMode mode,
                                  const PartitionOptions& options = {});

PartitionTable partition_function(const CountPath& path, const Eigen::VectorXd& orders,
                                  const Eigen::VectorXd& block_sizes, MomentMode mode,
                                  const PartitionOptions& options = {});

/// OLS slope of ln S on ln t for the given row of the table. Entries that are
/// missing or not strictly positive are dropped.
/// Throws TooFewPoints (< 3 points) or DegenerateAbscissa.
ScalingEstimate regression_slope(const PartitionTable& table, Eigen::Index order_index);

/// Least-squares fit through explicit (ln t, ln S) points.
ScalingEstimate fit_log_log(const Eigen::VectorXd& log_t, const Eigen::VectorXd& log_s,
                            double order = 0.0);

struct EstimationConfig {
  Eigen::VectorXd orders;
  /// Empty means default_block_sizes().
  std::optional<Eigen::VectorXd> block_sizes;
  MomentMode mode = MomentMode::Absolute;
  PartitionOptions partition;
};

struct LogLogPoint {
  double order;
  double log_t;
  double log_s;
};

struct ScalingReport {
  PartitionTable table;
  std::vector<ScalingEstimate> estimates;
  /// Every (ln t, ln S) pair that entered a regression.
  std::vector<LogLogPoint> points;
};

ScalingReport estimate_scaling_function(const SamplePath& path, const EstimationConfig& config);

}  // namespace imf
