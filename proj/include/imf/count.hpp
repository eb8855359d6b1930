#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "imf/path.hpp"
#include "imf/random.hpp"
#include "imf/semigroup.hpp"

namespace imf {

/// Jump-size law of the compound Poisson process, with pgf G.
struct JumpLaw {
  std::map<std::int64_t, double> pmf{{1, 1.0}};
  std::string label = "unit";

  bool is_unit() const noexcept { return pmf.size() == 1 && pmf.begin()->first == 1; }
  double pgf(double z) const noexcept;
  double mean() const noexcept;
};

JumpLaw unit_jump_law();

/// Throws NotAPgf unless the pmf lives on positive integers and sums to 1
/// within 1e-12. The "unit" label is reserved for the point mass at 1.
JumpLaw validate_jump_law(std::map<std::int64_t, double> pmf, std::string label = {});

/// Right-continuous step path of a compound Poisson process.
class JumpPath {
public:
  JumpPath() = default;
  /// Throws InvalidArgument if times are not strictly increasing in (0, horizon]
  /// or sizes are not positive.
  JumpPath(std::vector<double> jump_times, std::vector<std::int64_t> jump_sizes, double horizon);

  /// Sum of sizes of jumps at times <= t.
  std::int64_t value_at(double t) const;

  const std::vector<double>& jump_times() const noexcept { return times_; }
  const std::vector<std::int64_t>& jump_sizes() const noexcept { return sizes_; }
  double horizon() const noexcept { return horizon_; }

private:
  std::vector<double> times_;
  std::vector<std::int64_t> sizes_;
  std::vector<std::int64_t> cumulative_;
  double horizon_ = 0.0;
};

/// Unit-rate compound Poisson process on [0, horizon].
JumpPath simulate_compound_poisson(const JumpLaw& jumps, double horizon, Rng& rng);

/// X(t_j) = N(Y(t_j)) on the clock's grid. Throws HorizonExceeded if the
/// clock leaves [0, horizon] of the count path, InvalidArgument if it
/// decreases.
CountPath time_change(const JumpPath& count_path, const SamplePath& clock);

/// Horizon used when simulating N for a given clock: 10% above its maximum.
double count_horizon(const SamplePath& clock);

/// Simulates N over count_horizon(clock) and time-changes it by the clock.
CountPath simulate_time_changed(const JumpLaw& jumps, const SamplePath& clock, Rng& rng);

/// Largest |1 - G(F_t(z)) - e^{-t} (1 - G(z))| over z in [0, 1], t in {0.5, 1, 2},
/// where G is the jump pgf.
double pairing_residual(const SemigroupSpec& spec, const JumpLaw& jumps);

/// Throws PairingMismatch if pairing_residual exceeds `tol`.
void check_pairing(const SemigroupSpec& spec, const JumpLaw& jumps, double tol = 1e-4);

}  // namespace imf
