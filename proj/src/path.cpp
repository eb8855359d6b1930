#include "imf/path.hpp"

#include <cmath>

#include "imf/error.hpp"

namespace imf {

CountPath to_count(const SamplePath& path) {
  check_path_shape(path);
  CountPath out{path.times, Vector<std::int64_t>(path.values.size()), path.meta};
  for (Eigen::Index i = 0; i < path.values.size(); ++i) {
    const double v = path.values[i];
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e15) {
      fail(ErrorCode::NonIntegerPath,
           "value at t=" + std::to_string(path.times[i]) + " is not a nonnegative integer");
    }
    out.values[i] = static_cast<std::int64_t>(v);
  }
  return out;
}

template <typename Scalar>
void check_path_shape(const BasicPath<Scalar>& path) {
  if (path.times.size() != path.values.size()) {
    fail(ErrorCode::InvalidArgument, "times and values differ in length", "path");
  }
  if (path.times.size() == 0) {
    fail(ErrorCode::InvalidArgument, "path is empty", "path");
  }
  for (Eigen::Index i = 1; i < path.times.size(); ++i) {
    if (!(path.times[i] > path.times[i - 1])) {
      fail(ErrorCode::InvalidArgument, "times must be strictly increasing", "path");
    }
  }
}

template void check_path_shape(const BasicPath<double>&);
template void check_path_shape(const BasicPath<std::int64_t>&);

}  // namespace imf
