#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

namespace imf {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A sampled path: values on a time grid, with a free-form provenance note.
template <typename Scalar>
struct BasicPath {
  using scalar_type = Scalar;

  Eigen::VectorXd times;
  Vector<Scalar> values;
  std::string meta;

  Eigen::Index size() const noexcept { return times.size(); }
};

using SamplePath = BasicPath<double>;
using CountPath = BasicPath<std::int64_t>;

/// Uniform grid 0, step, 2 step, ..., count * step.
inline Eigen::VectorXd uniform_grid(Eigen::Index cells, double step) {
  Eigen::VectorXd t(cells + 1);
  for (Eigen::Index i = 0; i <= cells; ++i) {
    t[i] = static_cast<double>(i) * step;
  }
  return t;
}

template <typename Scalar>
bool is_nondecreasing(const BasicPath<Scalar>& path) {
  for (Eigen::Index i = 1; i < path.values.size(); ++i) {
    if (path.values[i] < path.values[i - 1]) return false;
  }
  return true;
}

template <typename Scalar>
SamplePath to_real(const BasicPath<Scalar>& path) {
  return SamplePath{path.times, path.values.template cast<double>(), path.meta};
}

/// Converts a real path with integral nonnegative values into a count path.
/// Throws NonIntegerPath otherwise.
CountPath to_count(const SamplePath& path);

/// Checks that a path has matching sizes and strictly increasing times.
/// Throws InvalidArgument otherwise.
template <typename Scalar>
void check_path_shape(const BasicPath<Scalar>& path);

}  // namespace imf
