#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "imf/error.hpp"
#include "imf/path.hpp"
#include "imf/random.hpp"

namespace imf {

/// Control measure v^{-2} du dv of the intersection of the cones A_l(t) and
/// A_l(t + lag), with cone width f(v) = min(v, T):
///
///   ln(T/l) + 1 - lag/l   for 0 <= lag <= l,
///   ln(T/lag)             for l <= lag <= T,
///   0                     for lag >= T.
///
/// Throws InvalidCutoffs unless 0 < l < T.
template <typename Scalar>
Scalar cone_measure(Scalar integral_scale, Scalar truncation, Scalar lag);

enum class CascadeKind { LogNormal, LogCompoundPoisson };

/// Law of the log-jump V of a log-compound-Poisson cascade; W = exp(V).
struct MarkLaw {
  struct PointMasses {
    std::vector<double> values;
    std::vector<double> probabilities;
  };
  struct Normal {
    double mean = 0.0;
    double sd = 1.0;
  };
  /// V exponential with rate `rate`: E W^theta = rate / (rate - theta).
  struct Exponential {
    double rate = 1.0;
  };
  std::variant<PointMasses, Normal, Exponential> law = PointMasses{{0.0}, {1.0}};

  static MarkLaw point(double v) { return MarkLaw{PointMasses{{v}, {1.0}}}; }

  /// sup{theta >= 0 : E W^theta < inf}.
  double moment_threshold() const noexcept;
  /// E W^theta. Throws MomentDiverges for theta >= moment_threshold().
  double moment(double theta) const;
  double draw(Rng& rng) const;
  void validate() const;
};

struct CascadeParams {
  CascadeKind kind = CascadeKind::LogNormal;
  double sigma2 = 0.05;
  double cp_intensity = 1.0;
  MarkLaw cp_marks;
  double integral_scale = 50.0;
  /// Small-scale cutoff l; defaults to grid_step.
  std::optional<double> truncation;
  double grid_step = 0.01;
  double length = 50.0;

  double cutoff() const noexcept { return truncation.value_or(grid_step); }
  Eigen::Index cells() const noexcept;
};

/// Throws InvalidArgument / InvalidCutoffs on invalid parameters.
void validate(const CascadeParams& params);

/// Derived drift m enforcing psi(1) = 0.
double drift(const CascadeParams& params);

/// psi(theta) = log E exp(theta nu).
double laplace_exponent(const CascadeParams& params, double theta);

/// tau(q) = q - psi(q).
double scaling_function(const CascadeParams& params, double q);

struct CascadeOptions {
  /// Cap on the expected number of Poisson points in the log-CP field.
  double max_expected_points = 5.0e7;
  /// Largest grid for the dense covariance fallback.
  Eigen::Index max_dense_size = 4096;
  /// Forces the dense factorization (used by tests to cross-check embedding).
  bool force_dense = false;
};

namespace detail {
class GaussianFieldSampler;
}

/// Simulator bound to one parameter set. The covariance embedding of the
/// log-normal field is computed once and shared by all draws; draws with
/// independent rngs may run concurrently.
class CascadeSimulator {
public:
  explicit CascadeSimulator(CascadeParams params, CascadeOptions options = {});

  /// omega_l on the left grid endpoints.
  Eigen::VectorXd log_field(Rng& rng) const;
  SamplePath path(Rng& rng) const;

  const CascadeParams& params() const noexcept { return params_; }
  /// False when the dense fallback is in use (log-normal kind only).
  bool uses_embedding() const noexcept;

private:
  CascadeParams params_;
  CascadeOptions options_;
  std::shared_ptr<const detail::GaussianFieldSampler> gaussian_;
};

/// omega_l(t_i) = L(A_l(t_i)) on the left endpoints t_i = i * grid_step,
/// i = 0, ..., cells - 1.
Eigen::VectorXd simulate_log_field(const CascadeParams& params, Rng& rng,
                                   const CascadeOptions& options = {});

/// Truncated cascade Y_l(t_j) = grid_step * sum_{i<j} exp(omega_l(t_i)),
/// j = 0, ..., cells. Nondecreasing with Y(0) = 0.
SamplePath simulate_cascade(const CascadeParams& params, Rng& rng,
                            const CascadeOptions& options = {});

/// Integrates exp(field) into a clock path (left Riemann sum).
SamplePath integrate_field(const Eigen::VectorXd& field, double grid_step);

// ---------------------------------------------------------------------------

template <typename Scalar>
Scalar cone_measure(Scalar integral_scale, Scalar truncation, Scalar lag) {
  using std::log;
  if (!(truncation > Scalar(0)) || !(truncation < integral_scale)) {
    fail(ErrorCode::InvalidCutoffs, "need 0 < truncation < integral_scale", "truncation");
  }
  if (lag < Scalar(0)) lag = -lag;
  if (lag >= integral_scale) return Scalar(0);
  if (lag <= truncation) {
    return log(integral_scale / truncation) + Scalar(1) - lag / truncation;
  }
  return log(integral_scale / lag);
}

}  // namespace imf
