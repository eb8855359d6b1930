#include "imf/thinning.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <type_traits>

#include "imf/error.hpp"

namespace imf {

namespace {

void check_open_unit(double v, const char* field) {
  if (!(v > 0.0 && v < 1.0)) {
    fail(ErrorCode::InvalidArgument, "multiplier values must lie strictly inside (0,1)", field);
  }
}

std::string list_to_string(const std::vector<double>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out + "}";
}

}  // namespace

MultiplierSampler MultiplierSampler::constant(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "constant multiplier must lie in (0,1]", "alpha");
  }
  return MultiplierSampler(Constant{alpha}, "constant " + std::to_string(alpha));
}

MultiplierSampler MultiplierSampler::two_point(std::vector<double> values,
                                               std::vector<double> probabilities) {
  if (values.size() != 2 || probabilities.size() != 2) {
    fail(ErrorCode::InvalidArgument, "two-point multiplier needs two values and two probabilities",
         "values");
  }
  for (double v : values) check_open_unit(v, "values");
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorCode::InvalidArgument, "probabilities must lie in [0,1]", "probabilities");
    }
  }
  if (std::abs(probabilities[0] + probabilities[1] - 1.0) > 1e-12) {
    fail(ErrorCode::InvalidArgument, "probabilities must sum to 1", "probabilities");
  }
  std::string desc = "two-point " + list_to_string(values) + " w.p. " + list_to_string(probabilities);
  return MultiplierSampler(TwoPoint{std::move(values), std::move(probabilities)}, std::move(desc));
}

MultiplierSampler MultiplierSampler::empirical(std::vector<double> values) {
  if (values.empty()) {
    fail(ErrorCode::InvalidArgument, "empirical multiplier needs at least one value", "values");
  }
  for (double v : values) check_open_unit(v, "values");
  std::string desc = "empirical (" + std::to_string(values.size()) + " values)";
  return MultiplierSampler(Empirical{std::move(values)}, std::move(desc));
}

double MultiplierSampler::draw(Rng& rng) const {
  return std::visit(
      [&rng](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Constant>) {
          return k.alpha;
        } else if constexpr (std::is_same_v<K, TwoPoint>) {
          std::bernoulli_distribution second(k.probabilities[1]);
          return second(rng) ? k.values[1] : k.values[0];
        } else {
          std::uniform_int_distribution<std::size_t> pick(0, k.values.size() - 1);
          return k.values[pick(rng)];
        }
      },
      kind_);
}

std::int64_t thin_value(const SemigroupSpec& spec, double alpha, std::int64_t x, Rng& rng,
                        const BranchingOptions& options) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "alpha must lie in (0,1]", "alpha");
  }
  if (x < 0) {
    fail(ErrorCode::InvalidArgument, "x must be nonnegative", "x");
  }
  if (x == 0 || alpha == 1.0) return x;
  return simulate_branching(spec, x, -std::log(alpha), rng, options).population;
}

std::int64_t thin_value(const SemigroupSpec& spec, const MultiplierSampler& multiplier,
                        std::int64_t x, Rng& rng, const BranchingOptions& options) {
  const double a = multiplier.draw(rng);
  return thin_value(spec, a, x, rng, options);
}

ThinnedPath thin_path(const SemigroupSpec& spec, const MultiplierSampler& multiplier,
                      const CountPath& path, Rng& rng, const BranchingOptions& options) {
  check_path_shape(path);
  if ((path.values.array() < 0).any()) {
    fail(ErrorCode::NonIntegerPath, "path values must be nonnegative");
  }

  ThinnedPath out;
  out.times = path.times;
  out.source_max = path.values.maxCoeff();
  out.multiplier_used = multiplier.draw(rng);
  if (out.multiplier_used == 1.0) {
    out.values = path.values;
    return out;
  }
  const double s = -std::log(out.multiplier_used);

  // partial[i] = Z_1(s) + ... + Z_i(s), one shared family for every time point.
  std::vector<std::int64_t> partial(static_cast<std::size_t>(out.source_max) + 1, 0);
  if (spec.is_binomial()) {
    std::bernoulli_distribution survives(out.multiplier_used);
    for (std::int64_t i = 1; i <= out.source_max; ++i) {
      partial[i] = partial[i - 1] + (survives(rng) ? 1 : 0);
    }
  } else {
    for (std::int64_t i = 1; i <= out.source_max; ++i) {
      partial[i] = partial[i - 1] + simulate_branching(spec, 1, s, rng, options).population;
    }
  }

  out.values.resize(path.values.size());
  for (Eigen::Index j = 0; j < path.values.size(); ++j) {
    out.values[j] = partial[static_cast<std::size_t>(path.values[j])];
  }
  return out;
}

ThinnedPath thin_path(const SemigroupSpec& spec, const MultiplierSampler& multiplier,
                      const SamplePath& path, Rng& rng, const BranchingOptions& options) {
  return thin_path(spec, multiplier, to_count(path), rng, options);
}

}  // namespace imf
