#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "imf/path.hpp"
#include "imf/random.hpp"
#include "imf/semigroup.hpp"

namespace imf {

/// Law of a (0,1)-valued multiplier A.
class MultiplierSampler {
public:
  struct Constant {
    double alpha;
  };
  struct TwoPoint {
    std::vector<double> values;
    std::vector<double> probabilities;
  };
  struct Empirical {
    std::vector<double> values;
  };
  using Kind = std::variant<Constant, TwoPoint, Empirical>;

  /// A constant multiplier; alpha = 1 is accepted as the exact identity.
  static MultiplierSampler constant(double alpha);
  static MultiplierSampler two_point(std::vector<double> values, std::vector<double> probabilities);
  /// Draws uniformly from `values`.
  static MultiplierSampler empirical(std::vector<double> values);

  double draw(Rng& rng) const;

  const Kind& kind() const noexcept { return kind_; }
  const std::string& description() const noexcept { return description_; }

private:
  MultiplierSampler(Kind kind, std::string description)
      : kind_(std::move(kind)), description_(std::move(description)) {}

  Kind kind_;
  std::string description_;
};

struct ThinnedPath {
  Eigen::VectorXd times;
  Vector<std::int64_t> values;
  double multiplier_used = 1.0;
  std::int64_t source_max = 0;

  CountPath as_path() const { return CountPath{times, values, "thinned"}; }
};

/// One draw of alpha (.)_F x = Z_1(s) + ... + Z_x(s) with s = -log(alpha).
std::int64_t thin_value(const SemigroupSpec& spec, double alpha, std::int64_t x, Rng& rng,
                        const BranchingOptions& options = {});

/// Random multiplier version: draws A from `multiplier`, then thins.
std::int64_t thin_value(const SemigroupSpec& spec, const MultiplierSampler& multiplier,
                        std::int64_t x, Rng& rng, const BranchingOptions& options = {});

/// Pathwise multiplication A (.)_F X(t).
///
/// Draws a single A and a single family Z_1, ..., Z_K (K = max of the path),
/// all run for the same s = -log A, and returns t -> Z_1(s) + ... + Z_{X(t)}(s).
/// Every call uses a fresh family.
ThinnedPath thin_path(const SemigroupSpec& spec, const MultiplierSampler& multiplier,
                      const CountPath& path, Rng& rng, const BranchingOptions& options = {});

/// Same as above for real-valued input; throws NonIntegerPath on non-integral values.
ThinnedPath thin_path(const SemigroupSpec& spec, const MultiplierSampler& multiplier,
                      const SamplePath& path, Rng& rng, const BranchingOptions& options = {});

}  // namespace imf
