#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "imf/count.hpp"
#include "imf/error.hpp"

namespace imf {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kMaxStirlingOrder = 30;
inline constexpr int kMaxBellOrder = 20;

/// Stirling number of the second kind {n r}, 1 <= r <= n <= 30.
BigInt stirling2(int n, int r);

/// Incomplete exponential Bell polynomial B_{r,k}(x_1, ..., x_{r-k+1}),
/// 1 <= k <= r <= 20, via B_{n,k} = sum_i C(n-1, i-1) x_i B_{n-i,k-1}.
/// `x` must hold at least r - k + 1 entries.
template <typename Scalar>
Scalar bell_incomplete(int r, int k, std::span<const Scalar> x);

double bell_incomplete(int r, int k, std::span<const double> x);

/// x (x-1) ... (x-n+1), exactly; zero when 0 <= x < n.
BigInt falling_factorial(std::int64_t x, int n);

/// Exact running sum of falling factorials of a fixed order.
class FallingFactorialSum {
public:
  explicit FallingFactorialSum(int order);

  void add(std::int64_t x);
  BigInt total() const;
  std::int64_t count() const noexcept { return count_; }
  /// total / count, rounded once.
  double mean() const;

private:
  int order_;
  std::int64_t fast_limit_;
  unsigned __int128 partial_ = 0;
  BigInt overflow_ = 0;
  std::int64_t count_ = 0;
};

/// Sample mean of m^[n] over the samples. Throws EmptySample.
double factorial_moment_stat(std::span<const std::int64_t> samples, int n);

/// G^{(j)}(1) = E W (W-1) ... (W-j+1) for j = 1..count, exact for the
/// finite-support law (probabilities are taken as the exact binary values).
std::vector<Rational> jump_derivatives(const JumpLaw& jumps, int count);

struct MomentCoefficients {
  int order = 0;
  /// K_n(k), k = 1..n.
  std::vector<Rational> raw_coeffs;
  /// B_{n,k}(G'(1), ...), k = 1..n: coefficients of the factorial moment.
  std::vector<Rational> factorial_coeffs;
  /// G'(1), ..., G^{(n)}(1).
  std::vector<Rational> jump_derivatives;
  /// K_n(k) c(k), once c-estimates are supplied.
  std::optional<std::vector<double>> scaled_coeffs;
};

/// K_n(k) = sum_{r=k}^n {n r} B_{r,k}(G'(1), ..., G^{(r-k+1)}(1)).
MomentCoefficients moment_coefficients(int n, const JumpLaw& jumps);

/// c(k) = T^{-tau(k)} E Y(T)^k, with its provenance.
struct CEstimate {
  double value = 1.0;
  double std_error = 0.0;
  bool exact = false;
};

struct MomentPrediction {
  /// E X(t)^n = sum_k K_n(k) c(k) t^{tau(k)}.
  double raw = 0.0;
  double raw_stderr = 0.0;
  /// E X(t)^[n] = sum_k B_{n,k}(G'(1), ...) c(k) t^{tau(k)}.
  double factorial = 0.0;
  double factorial_stderr = 0.0;
  MomentCoefficients coefficients;
  std::vector<CEstimate> c_used;
  std::vector<std::string> warnings;
};

/// Theoretical raw and factorial moments of X(t) = N(Y(t)).
///
/// `tau` may throw MomentDiverges. Standard errors propagate the c-estimate
/// errors assuming independent estimates. Throws MissingEstimates if fewer
/// than n estimates are supplied.
MomentPrediction theoretical_moments(int n, double t, const JumpLaw& jumps,
                                     const std::function<double(double)>& tau,
                                     std::span<const CEstimate> c_estimates);

// ---------------------------------------------------------------------------

template <typename Scalar>
Scalar bell_incomplete(int r, int k, std::span<const Scalar> x) {
  if (k < 1 || r < k || r > kMaxBellOrder) {
    fail(ErrorCode::OutOfRange, "need 1 <= k <= r <= 20", "r");
  }
  if (static_cast<int>(x.size()) < r - k + 1) {
    fail(ErrorCode::OutOfRange, "need r - k + 1 arguments", "x");
  }
  // table[n][j] = B_{n,j}, n = 0..r, j = 0..k.
  std::vector<std::vector<Scalar>> table(r + 1, std::vector<Scalar>(k + 1, Scalar(0)));
  table[0][0] = Scalar(1);
  // binom[n][i] = C(n, i)
  std::vector<std::vector<Scalar>> binom(r + 1, std::vector<Scalar>(r + 1, Scalar(0)));
  for (int n = 0; n <= r; ++n) {
    binom[n][0] = Scalar(1);
    for (int i = 1; i <= n; ++i) binom[n][i] = binom[n - 1][i - 1] + (i < n ? binom[n - 1][i] : Scalar(0));
  }
  for (int j = 1; j <= k; ++j) {
    for (int n = j; n <= r; ++n) {
      Scalar acc(0);
      for (int i = 1; i <= n - j + 1; ++i) {
        if (i - 1 >= static_cast<int>(x.size())) break;
        acc += binom[n - 1][i - 1] * x[i - 1] * table[n - i][j - 1];
      }
      table[n][j] = acc;
    }
  }
  return table[r][k];
}

}  // namespace imf
