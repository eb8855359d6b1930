#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "imf/random.hpp"

namespace imf {

/// A continuous composition semigroup of pgfs F = (F_s), given by the
/// subcritical Markov branching mechanism that generates it: each individual
/// lives an exponential time with rate `rate` and is then replaced by k
/// offspring with probability offspring[k].
///
/// Valid specs satisfy rate * (1 - h'(1)) = 1, so that F_s'(1) = exp(-s).
/// Construct through validate_spec().
struct SemigroupSpec {
  double rate = 1.0;
  std::map<int, double> offspring{{0, 1.0}};
  std::string label = "binomial";

  /// Pure-death mechanism with unit rate: F_s(z) = 1 - e^{-s} + e^{-s} z.
  bool is_binomial() const noexcept;
  /// Offspring pgf h(z).
  double offspring_pgf(double z) const noexcept;
  /// h'(1).
  double offspring_mean() const noexcept;
};

SemigroupSpec binomial_semigroup();

/// Validates a raw mechanism and returns the spec.
///
/// Throws NotAPgf, NormalizationViolated, DegenerateSemigroup or
/// InvalidArgument (non-positive rate, misuse of the "binomial" label).
SemigroupSpec validate_spec(double rate, std::map<int, double> offspring, std::string label = {});

struct BranchingSample {
  std::int64_t initial = 0;
  double elapsed = 0.0;
  std::int64_t population = 0;
};

struct BranchingOptions {
  std::int64_t max_population = 100'000'000;
};

/// Default fixed step for the backward equation.
inline constexpr double kSemigroupStep = 1e-3;

/// F_s(z). Closed form for the binomial spec, otherwise integrate_semigroup().
double eval_semigroup(const SemigroupSpec& spec, double s, double z);

/// F_s(z) by fixed-step RK4 on the backward equation dF/ds = rate (h(F) - F),
/// always, regardless of the spec. The integration runs on u = 1 - F, which
/// keeps relative accuracy as F approaches 1.
double integrate_semigroup(const SemigroupSpec& spec, double s, double z,
                           double step = kSemigroupStep);

/// 1 - F_s(z), to full relative precision.
double semigroup_complement(const SemigroupSpec& spec, double s, double z,
                            double step = kSemigroupStep);

/// G(z) = lim_t (F_t(z) - F_t(0)) / (1 - F_t(0)), evaluated at `horizon` and
/// at 2 * horizon. Throws NotConverged if the two differ by more than `tol`.
double extract_limit_pgf(const SemigroupSpec& spec, double z, double horizon = 30.0,
                         double tol = 1e-6);

/// Population at semigroup time s of a branching process started from
/// `initial` individuals; distributed as Z_1(s) + ... + Z_initial(s).
BranchingSample simulate_branching(const SemigroupSpec& spec, std::int64_t initial, double s,
                                   Rng& rng, const BranchingOptions& options = {});

}  // namespace imf
