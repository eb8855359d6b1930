#include "imf/count.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "imf/error.hpp"

namespace imf {

double JumpLaw::pgf(double z) const noexcept {
  double g = 0.0;
  for (const auto& [k, p] : pmf) {
    g += p * std::pow(z, static_cast<double>(k));
  }
  return g;
}

double JumpLaw::mean() const noexcept {
  double m = 0.0;
  for (const auto& [k, p] : pmf) {
    m += p * static_cast<double>(k);
  }
  return m;
}

JumpLaw unit_jump_law() { return JumpLaw{}; }

JumpLaw validate_jump_law(std::map<std::int64_t, double> pmf, std::string label) {
  if (pmf.empty()) {
    fail(ErrorCode::NotAPgf, "jump law is empty", "pmf");
  }
  double total = 0.0;
  for (const auto& [k, p] : pmf) {
    if (k < 1) {
      fail(ErrorCode::NotAPgf, "jump sizes must be positive integers", "pmf");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorCode::NotAPgf, "probability for size " + std::to_string(k) + " outside [0,1]",
           "pmf");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    fail(ErrorCode::NotAPgf, "jump probabilities sum to " + std::to_string(total), "pmf");
  }
  std::erase_if(pmf, [](const auto& kv) { return kv.second == 0.0; });
  JumpLaw law{std::move(pmf), {}};
  if (label.empty()) label = law.is_unit() ? "unit" : "compound";
  if (label == "unit" && !law.is_unit()) {
    fail(ErrorCode::InvalidArgument, "label 'unit' is reserved for the point mass at 1", "label");
  }
  law.label = std::move(label);
  return law;
}

JumpPath::JumpPath(std::vector<double> jump_times, std::vector<std::int64_t> jump_sizes,
                   double horizon)
    : times_(std::move(jump_times)), sizes_(std::move(jump_sizes)), horizon_(horizon) {
  if (!(horizon_ >= 0.0) || !std::isfinite(horizon_)) {
    fail(ErrorCode::InvalidArgument, "horizon must be nonnegative and finite", "horizon");
  }
  if (times_.size() != sizes_.size()) {
    fail(ErrorCode::InvalidArgument, "jump times and sizes differ in length", "jump_time");
  }
  cumulative_.reserve(sizes_.size());
  std::int64_t running = 0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(times_[i] > 0.0) || times_[i] > horizon_ || (i > 0 && !(times_[i] > times_[i - 1]))) {
      fail(ErrorCode::InvalidArgument,
           "jump times must be strictly increasing within (0, horizon]", "jump_time");
    }
    if (sizes_[i] < 1) {
      fail(ErrorCode::InvalidArgument, "jump sizes must be positive", "jump_size");
    }
    running += sizes_[i];
    cumulative_.push_back(running);
  }
}

std::int64_t JumpPath::value_at(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 0;
  return cumulative_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

JumpPath simulate_compound_poisson(const JumpLaw& jumps, double horizon, Rng& rng) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    fail(ErrorCode::InvalidArgument, "horizon must be nonnegative and finite", "horizon");
  }
  std::vector<std::int64_t> sizes_table;
  std::vector<double> weights;
  for (const auto& [k, p] : jumps.pmf) {
    sizes_table.push_back(k);
    weights.push_back(p);
  }
  std::discrete_distribution<std::size_t> size_dist(weights.begin(), weights.end());
  std::exponential_distribution<double> wait(1.0);
  const bool unit = jumps.is_unit();

  std::vector<double> times;
  std::vector<std::int64_t> sizes;
  times.reserve(static_cast<std::size_t>(horizon * 1.05) + 16);
  double clock = 0.0;
  while (true) {
    clock += wait(rng);
    if (clock > horizon) break;
    // Exponential draws are a.s. positive; guard against ties from rounding.
    if (!times.empty() && clock <= times.back()) continue;
    times.push_back(clock);
    sizes.push_back(unit ? 1 : sizes_table[size_dist(rng)]);
  }
  return JumpPath(std::move(times), std::move(sizes), horizon);
}

CountPath time_change(const JumpPath& count_path, const SamplePath& clock) {
  check_path_shape(clock);
  CountPath out{clock.times, Vector<std::int64_t>(clock.values.size()), "time-changed count"};
  for (Eigen::Index j = 0; j < clock.values.size(); ++j) {
    const double y = clock.values[j];
    if (!(y >= 0.0)) {
      fail(ErrorCode::InvalidArgument, "clock values must be nonnegative", "clock");
    }
    if (j > 0 && y < clock.values[j - 1]) {
      fail(ErrorCode::InvalidArgument, "clock must be nondecreasing", "clock");
    }
    if (y > count_path.horizon()) {
      fail(ErrorCode::HorizonExceeded, "clock value " + std::to_string(y) + " at t=" +
                                           std::to_string(clock.times[j]) +
                                           " exceeds the count horizon " +
                                           std::to_string(count_path.horizon()));
    }
    out.values[j] = count_path.value_at(y);
  }
  return out;
}

double count_horizon(const SamplePath& clock) {
  return 1.1 * (clock.values.size() ? clock.values.maxCoeff() : 0.0);
}

CountPath simulate_time_changed(const JumpLaw& jumps, const SamplePath& clock, Rng& rng) {
  const JumpPath n = simulate_compound_poisson(jumps, count_horizon(clock), rng);
  return time_change(n, clock);
}

double pairing_residual(const SemigroupSpec& spec, const JumpLaw& jumps) {
  double worst = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    for (int i = 0; i <= 20; ++i) {
      const double z = i / 20.0;
      const double lhs = 1.0 - jumps.pgf(eval_semigroup(spec, t, z));
      const double rhs = std::exp(-t) * (1.0 - jumps.pgf(z));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

void check_pairing(const SemigroupSpec& spec, const JumpLaw& jumps, double tol) {
  const double r = pairing_residual(spec, jumps);
  if (r > tol) {
    fail(ErrorCode::PairingMismatch, "jump law does not solve 1 - G(F_t) = e^{-t}(1 - G); residual " +
                                         std::to_string(r));
  }
}

}  // namespace imf
