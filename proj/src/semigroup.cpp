#include "imf/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "imf/error.hpp"

namespace imf {

namespace {

constexpr double kPgfTol = 1e-12;
constexpr double kNormalizationTol = 1e-9;

// 1 - (1 - u)^k without cancellation for small u.
double one_minus_power(double u, int k) {
  if (k == 0) return 0.0;
  if (u >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(k) * std::log1p(-u));
}

// du/ds for u = 1 - F: rate * (1 - h(1 - u) - u).
double complement_rhs(const SemigroupSpec& spec, double u) {
  u = std::clamp(u, 0.0, 1.0);
  double g = 0.0;
  for (const auto& [k, p] : spec.offspring) {
    g += p * one_minus_power(u, k);
  }
  return spec.rate * (g - u);
}

}  // namespace

bool SemigroupSpec::is_binomial() const noexcept {
  return rate == 1.0 && offspring.size() == 1 && offspring.begin()->first == 0 &&
         offspring.begin()->second == 1.0;
}

double SemigroupSpec::offspring_pgf(double z) const noexcept {
  double h = 0.0;
  for (const auto& [k, p] : offspring) {
    h += p * std::pow(z, k);
  }
  return h;
}

double SemigroupSpec::offspring_mean() const noexcept {
  double m = 0.0;
  for (const auto& [k, p] : offspring) {
    m += p * k;
  }
  return m;
}

SemigroupSpec binomial_semigroup() { return SemigroupSpec{}; }

SemigroupSpec validate_spec(double rate, std::map<int, double> offspring, std::string label) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    fail(ErrorCode::InvalidArgument, "rate must be positive and finite", "rate");
  }
  if (offspring.empty()) {
    fail(ErrorCode::NotAPgf, "offspring law is empty", "offspring");
  }
  double total = 0.0;
  for (const auto& [k, p] : offspring) {
    if (k < 0) {
      fail(ErrorCode::NotAPgf, "offspring counts must be nonnegative", "offspring");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorCode::NotAPgf, "probability for k=" + std::to_string(k) + " is outside [0,1]",
           "offspring");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kPgfTol) {
    fail(ErrorCode::NotAPgf, "offspring probabilities sum to " + std::to_string(total),
         "offspring");
  }
  std::erase_if(offspring, [](const auto& kv) { return kv.second == 0.0; });
  if (offspring.size() == 1 && offspring.begin()->first == 1) {
    fail(ErrorCode::DegenerateSemigroup, "offspring law {1:1} gives the identity semigroup",
         "offspring");
  }

  SemigroupSpec spec;
  spec.rate = rate;
  spec.offspring = std::move(offspring);
  const double normalization = rate * (1.0 - spec.offspring_mean());
  if (std::abs(normalization - 1.0) > kNormalizationTol) {
    fail(ErrorCode::NormalizationViolated,
         "rate * (1 - h'(1)) = " + std::to_string(normalization) + ", expected 1", "rate");
  }
  if (label.empty()) {
    label = spec.is_binomial() ? "binomial" : "branching";
  }
  if (label == "binomial" && !spec.is_binomial()) {
    fail(ErrorCode::InvalidArgument,
         "label 'binomial' is reserved for rate=1, offspring={0:1}", "label");
  }
  spec.label = std::move(label);
  return spec;
}

double semigroup_complement(const SemigroupSpec& spec, double s, double z, double step) {
  if (!(z >= 0.0 && z <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "z must lie in [0,1]", "z");
  }
  if (!(s >= 0.0) || !std::isfinite(s)) {
    fail(ErrorCode::InvalidArgument, "s must be nonnegative and finite", "s");
  }
  if (!(step > 0.0)) {
    fail(ErrorCode::InvalidArgument, "step must be positive", "step");
  }
  double u = 1.0 - z;
  double elapsed = 0.0;
  while (elapsed < s && u > 0.0) {
    const double h = std::min(step, s - elapsed);
    if (h <= s * 1e-15) break;
    const double k1 = complement_rhs(spec, u);
    const double k2 = complement_rhs(spec, u + 0.5 * h * k1);
    const double k3 = complement_rhs(spec, u + 0.5 * h * k2);
    const double k4 = complement_rhs(spec, u + h * k3);
    u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    elapsed += h;
    if (!std::isfinite(u)) {
      fail(ErrorCode::IntegrationFailure, "non-finite state in backward equation");
    }
  }
  return std::clamp(u, 0.0, 1.0);
}

double integrate_semigroup(const SemigroupSpec& spec, double s, double z, double step) {
  return 1.0 - semigroup_complement(spec, s, z, step);
}

double eval_semigroup(const SemigroupSpec& spec, double s, double z) {
  if (spec.is_binomial()) {
    if (!(z >= 0.0 && z <= 1.0)) {
      fail(ErrorCode::InvalidArgument, "z must lie in [0,1]", "z");
    }
    if (!(s >= 0.0)) {
      fail(ErrorCode::InvalidArgument, "s must be nonnegative", "s");
    }
    const double a = std::exp(-s);
    return 1.0 - a + a * z;
  }
  return integrate_semigroup(spec, s, z);
}

double extract_limit_pgf(const SemigroupSpec& spec, double z, double horizon, double tol) {
  if (!(horizon > 0.0) || !(tol > 0.0)) {
    fail(ErrorCode::InvalidArgument, "horizon and tol must be positive", "horizon");
  }
  if (!(z >= 0.0 && z <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "z must lie in [0,1]", "z");
  }
  if (z == 1.0) return 1.0;
  if (z == 0.0) return 0.0;

  auto ratio_at = [&](double t) {
    const double uz = semigroup_complement(spec, t, z);
    const double u0 = semigroup_complement(spec, t, 0.0);
    if (!(u0 > 0.0)) {
      fail(ErrorCode::NotConverged, "1 - F_t(0) underflowed at t=" + std::to_string(t));
    }
    return 1.0 - uz / u0;
  };
  const double near = ratio_at(horizon);
  const double far = ratio_at(2.0 * horizon);
  if (std::abs(far - near) > tol) {
    fail(ErrorCode::NotConverged, "limit pgf changed by " + std::to_string(std::abs(far - near)) +
                                      " between horizon and twice the horizon");
  }
  return far;
}

BranchingSample simulate_branching(const SemigroupSpec& spec, std::int64_t initial, double s,
                                   Rng& rng, const BranchingOptions& options) {
  if (initial < 0) {
    fail(ErrorCode::InvalidArgument, "initial population must be nonnegative", "initial");
  }
  if (!(s >= 0.0) || !std::isfinite(s)) {
    fail(ErrorCode::InvalidArgument, "s must be nonnegative and finite", "s");
  }
  BranchingSample out{initial, s, initial};
  if (initial == 0 || s == 0.0) return out;

  if (spec.is_binomial()) {
    std::binomial_distribution<std::int64_t> survivors(initial, std::exp(-s));
    out.population = survivors(rng);
    return out;
  }

  std::vector<int> sizes;
  std::vector<double> weights;
  for (const auto& [k, p] : spec.offspring) {
    sizes.push_back(k);
    weights.push_back(p);
  }
  std::discrete_distribution<std::size_t> offspring(weights.begin(), weights.end());
  std::exponential_distribution<double> wait(1.0);

  std::int64_t population = initial;
  double clock = 0.0;
  while (population > 0) {
    clock += wait(rng) / (spec.rate * static_cast<double>(population));
    if (clock > s) break;
    population += sizes[offspring(rng)] - 1;
    if (population > options.max_population) {
      fail(ErrorCode::PopulationOverflow,
           "population exceeded " + std::to_string(options.max_population));
    }
  }
  out.population = population;
  return out;
}

}  // namespace imf
