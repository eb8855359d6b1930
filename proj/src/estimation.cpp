#include "imf/estimation.hpp"

#include <cmath>
#include <limits>

#include "imf/combinatorics.hpp"
#include "imf/error.hpp"

namespace imf {

namespace {

constexpr double kGridTol = 1e-6;

struct GridInfo {
  double step = 0.0;
  Eigen::Index cells = 0;
};

template <typename Scalar>
GridInfo check_uniform(const BasicPath<Scalar>& path) {
  check_path_shape(path);
  if (path.size() < 2) {
    fail(ErrorCode::NonUniformGrid, "path needs at least two grid points", "path");
  }
  GridInfo g;
  g.cells = path.size() - 1;
  g.step = (path.times[g.cells] - path.times[0]) / static_cast<double>(g.cells);
  for (Eigen::Index i = 1; i <= g.cells; ++i) {
    const double d = path.times[i] - path.times[i - 1];
    if (std::abs(d - g.step) > kGridTol * g.step) {
      fail(ErrorCode::NonUniformGrid,
           "grid spacing at t=" + std::to_string(path.times[i]) + " differs from " +
               std::to_string(g.step),
           "path");
    }
  }
  return g;
}

// Grid-index stride of each block size.
std::vector<Eigen::Index> block_strides(const GridInfo& g, const Eigen::VectorXd& block_sizes) {
  if (block_sizes.size() == 0) {
    fail(ErrorCode::InvalidArgument, "no block sizes given", "block_sizes");
  }
  std::vector<Eigen::Index> strides;
  for (Eigen::Index j = 0; j < block_sizes.size(); ++j) {
    const double t = block_sizes[j];
    if (j > 0 && !(t > block_sizes[j - 1])) {
      fail(ErrorCode::InvalidArgument, "block sizes must be strictly increasing", "block_sizes");
    }
    const double ratio = t / g.step;
    const double k = std::round(ratio);
    if (!(k >= 1.0) || std::abs(ratio - k) > kGridTol * std::max(1.0, k)) {
      fail(ErrorCode::BlockMisaligned,
           "block size " + std::to_string(t) + " is not a positive multiple of the grid step",
           "block_sizes");
    }
    const auto stride = static_cast<Eigen::Index>(k);
    if (stride > g.cells) {
      fail(ErrorCode::BlockMisaligned,
           "block size " + std::to_string(t) + " exceeds the path length", "block_sizes");
    }
    strides.push_back(stride);
  }
  return strides;
}

PartitionTable make_table(const GridInfo& g, const Eigen::VectorXd& orders,
                          const Eigen::VectorXd& block_sizes,
                          const std::vector<Eigen::Index>& strides, MomentMode mode) {
  PartitionTable table;
  table.mode = mode;
  table.orders = orders;
  table.block_sizes = block_sizes;
  table.total_length = static_cast<double>(g.cells) * g.step;
  table.block_counts.resize(block_sizes.size());
  for (std::size_t j = 0; j < strides.size(); ++j) {
    table.block_counts[j] = static_cast<int>(g.cells / strides[j]);
  }
  table.stats.setZero(orders.size(), block_sizes.size());
  return table;
}

void check_factorial_orders(const Eigen::VectorXd& orders, const PartitionOptions& options) {
  for (double n : orders) {
    if (n != std::floor(n) || n < 1.0 || n > options.max_factorial_order) {
      fail(ErrorCode::InvalidArgument,
           "factorial orders must be integers in [1, " +
               std::to_string(options.max_factorial_order) + "]",
           "orders");
    }
  }
}

}  // namespace

bool PartitionTable::missing(Eigen::Index order_index, Eigen::Index block_index) const {
  return std::isnan(stats(order_index, block_index));
}

Eigen::VectorXd default_block_sizes(double grid_step, double total_length) {
  std::vector<double> sizes;
  for (double mult = 4.0; mult * grid_step <= total_length / 8.0 * (1.0 + 1e-12) && sizes.size() < 20;
       mult *= 2.0) {
    sizes.push_back(mult * grid_step);
  }
  return Eigen::Map<Eigen::VectorXd>(sizes.data(), static_cast<Eigen::Index>(sizes.size()));
}

PartitionTable partition_function(const CountPath& path, const Eigen::VectorXd& orders,
                                  const Eigen::VectorXd& block_sizes, MomentMode mode,
                                  const PartitionOptions& options) {
  if (mode == MomentMode::Absolute) {
    return partition_function(to_real(path), orders, block_sizes, mode, options);
  }
  const GridInfo g = check_uniform(path);
  const auto strides = block_strides(g, block_sizes);
  check_factorial_orders(orders, options);
  PartitionTable table = make_table(g, orders, block_sizes, strides, mode);

  for (std::size_t j = 0; j < strides.size(); ++j) {
    const Eigen::Index k = strides[j];
    const Eigen::Index blocks = g.cells / k;
    for (Eigen::Index i = 0; i < orders.size(); ++i) {
      FallingFactorialSum sum(static_cast<int>(orders[i]));
      for (Eigen::Index b = 1; b <= blocks; ++b) {
        sum.add(path.values[b * k] - path.values[(b - 1) * k]);
      }
      table.stats(i, static_cast<Eigen::Index>(j)) =
          sum.total() == 0 ? std::numeric_limits<double>::quiet_NaN() : sum.mean();
    }
  }
  return table;
}

PartitionTable partition_function(const SamplePath& path, const Eigen::VectorXd& orders,
                                  const Eigen::VectorXd& block_sizes, MomentMode mode,
                                  const PartitionOptions& options) {
  const GridInfo g = check_uniform(path);
  if (mode == MomentMode::Factorial) {
    CountPath counts{path.times, Vector<std::int64_t>(path.size()), path.meta};
    const double base = path.values[0];
    for (Eigen::Index i = 0; i < path.size(); ++i) {
      const double rel = path.values[i] - base;
      if (rel != std::floor(rel) || std::abs(rel) > 9.0e15) {
        fail(ErrorCode::NonIntegerIncrements,
             "increment at t=" + std::to_string(path.times[i]) + " is not an integer", "path");
      }
      counts.values[i] = static_cast<std::int64_t>(rel);
    }
    return partition_function(counts, orders, block_sizes, mode, options);
  }

  const auto strides = block_strides(g, block_sizes);
  for (double q : orders) {
    if (!(q >= 0.0) || !std::isfinite(q)) {
      fail(ErrorCode::InvalidArgument, "absolute-moment orders must be nonnegative", "orders");
    }
  }
  PartitionTable table = make_table(g, orders, block_sizes, strides, mode);
  for (std::size_t j = 0; j < strides.size(); ++j) {
    const Eigen::Index k = strides[j];
    const Eigen::Index blocks = g.cells / k;
    Eigen::VectorXd increments(blocks);
    for (Eigen::Index b = 1; b <= blocks; ++b) {
      increments[b - 1] = std::abs(path.values[b * k] - path.values[(b - 1) * k]);
    }
    for (Eigen::Index i = 0; i < orders.size(); ++i) {
      const double q = orders[i];
      table.stats(i, static_cast<Eigen::Index>(j)) =
          q == 0.0 ? 1.0 : increments.array().pow(q).mean();
    }
  }
  return table;
}

ScalingEstimate fit_log_log(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double order) {
  const Eigen::Index n = x.size();
  if (n < 3) {
    fail(ErrorCode::TooFewPoints,
         "order " + std::to_string(order) + " has " + std::to_string(n) + " usable points");
  }
  const double nd = static_cast<double>(n);
  const double sx = x.sum();
  const double sy = y.sum();
  const double sxy = x.dot(y);
  const double sxx = x.squaredNorm();
  const double denom = sxx - sx * sx / nd;
  if (!(denom > 1e-14 * std::max(1.0, sxx))) {
    fail(ErrorCode::DegenerateAbscissa, "all block sizes coincide");
  }
  ScalingEstimate est;
  est.order = order;
  est.slope = (sxy - sx * sy / nd) / denom;
  est.intercept = (sy - est.slope * sx) / nd;
  est.points_used = static_cast<int>(n);

  const Eigen::VectorXd resid = y.array() - (est.intercept + est.slope * x.array());
  const double sse = resid.squaredNorm();
  const double sst = (y.array() - sy / nd).matrix().squaredNorm();
  est.std_error = std::sqrt(sse / (nd - 2.0) / denom);
  est.r_squared = sst > 0.0 ? 1.0 - sse / sst : 1.0;
  return est;
}

ScalingEstimate regression_slope(const PartitionTable& table, Eigen::Index order_index) {
  if (order_index < 0 || order_index >= table.orders.size()) {
    fail(ErrorCode::InvalidArgument, "order index out of range", "order");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (Eigen::Index j = 0; j < table.block_sizes.size(); ++j) {
    const double s = table.stats(order_index, j);
    if (std::isnan(s) || !(s > 0.0)) continue;
    xs.push_back(std::log(table.block_sizes[j]));
    ys.push_back(std::log(s));
  }
  const auto n = static_cast<Eigen::Index>(xs.size());
  return fit_log_log(Eigen::Map<Eigen::VectorXd>(xs.data(), n),
                     Eigen::Map<Eigen::VectorXd>(ys.data(), n), table.orders[order_index]);
}

ScalingReport estimate_scaling_function(const SamplePath& path, const EstimationConfig& config) {
  const GridInfo g = check_uniform(path);
  const Eigen::VectorXd blocks =
      config.block_sizes ? *config.block_sizes
                         : default_block_sizes(g.step, static_cast<double>(g.cells) * g.step);
  ScalingReport report;
  report.table = partition_function(path, config.orders, blocks, config.mode, config.partition);
  for (Eigen::Index i = 0; i < report.table.orders.size(); ++i) {
    report.estimates.push_back(regression_slope(report.table, i));
    for (Eigen::Index j = 0; j < blocks.size(); ++j) {
      const double s = report.table.stats(i, j);
      if (std::isnan(s) || !(s > 0.0)) continue;
      report.points.push_back({report.table.orders[i], std::log(blocks[j]), std::log(s)});
    }
  }
  return report;
}

}  // namespace imf
