#include "imf/combinatorics.hpp"

#include <cmath>
#include <limits>

namespace imf {

namespace {

Rational exact_rational(double p) {
  // Doubles are dyadic rationals; decompose exactly.
  int exponent = 0;
  const double mantissa = std::frexp(p, &exponent);
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  Rational r(scaled);
  const int shift = exponent - 53;
  if (shift >= 0) {
    r *= Rational(BigInt(1) << shift);
  } else {
    r /= Rational(BigInt(1) << (-shift));
  }
  return r;
}

// Largest x for which x^n stays below 2^120.
std::int64_t fast_limit_for(int order) {
  if (order <= 1) return std::numeric_limits<std::int64_t>::max();
  const double lim = std::floor(std::pow(2.0, 120.0 / order)) - 1.0;
  return lim > 9.0e18 ? std::numeric_limits<std::int64_t>::max() : static_cast<std::int64_t>(lim);
}

}  // namespace

BigInt stirling2(int n, int r) {
  if (n < 1 || n > kMaxStirlingOrder || r < 1 || r > n) {
    fail(ErrorCode::OutOfRange, "need 1 <= r <= n <= 30", "n");
  }
  // S(m, j) = j S(m-1, j) + S(m-1, j-1)
  std::vector<BigInt> row(n + 1, 0);
  row[0] = 1;
  for (int m = 1; m <= n; ++m) {
    for (int j = m; j >= 1; --j) {
      row[j] = BigInt(j) * row[j] + row[j - 1];
    }
    row[0] = 0;
  }
  return row[r];
}

double bell_incomplete(int r, int k, std::span<const double> x) {
  return bell_incomplete<double>(r, k, x);
}

BigInt falling_factorial(std::int64_t x, int n) {
  if (n < 0) {
    fail(ErrorCode::OutOfRange, "order must be nonnegative", "n");
  }
  BigInt out = 1;
  for (int i = 0; i < n; ++i) {
    const std::int64_t factor = x - i;
    if (factor == 0) return 0;
    out *= factor;
  }
  return out;
}

FallingFactorialSum::FallingFactorialSum(int order) : order_(order), fast_limit_(fast_limit_for(order)) {
  if (order < 1) {
    fail(ErrorCode::OutOfRange, "factorial moment order must be >= 1", "n");
  }
}

void FallingFactorialSum::add(std::int64_t x) {
  ++count_;
  if (x >= 0 && x < order_) return;
  if (x >= 0 && x <= fast_limit_) {
    unsigned __int128 term = 1;
    for (int i = 0; i < order_; ++i) term *= static_cast<unsigned __int128>(x - i);
    if (__builtin_add_overflow(partial_, term, &partial_)) {
      // partial_ holds the wrapped sum; restore and flush.
      partial_ -= term;
      overflow_ += BigInt(partial_) + BigInt(term);
      partial_ = 0;
    }
    return;
  }
  overflow_ += falling_factorial(x, order_);
}

BigInt FallingFactorialSum::total() const { return overflow_ + BigInt(partial_); }

double FallingFactorialSum::mean() const {
  if (count_ == 0) {
    fail(ErrorCode::EmptySample, "no samples");
  }
  return Rational(total(), BigInt(count_)).convert_to<double>();
}

double factorial_moment_stat(std::span<const std::int64_t> samples, int n) {
  if (samples.empty()) {
    fail(ErrorCode::EmptySample, "no samples", "samples");
  }
  FallingFactorialSum sum(n);
  for (std::int64_t x : samples) sum.add(x);
  return sum.mean();
}

std::vector<Rational> jump_derivatives(const JumpLaw& jumps, int count) {
  std::vector<Rational> out(count, Rational(0));
  for (const auto& [k, p] : jumps.pmf) {
    const Rational prob = exact_rational(p);
    for (int j = 1; j <= count; ++j) {
      const BigInt ff = falling_factorial(k, j);
      if (ff == 0) break;
      out[j - 1] += prob * Rational(ff);
    }
  }
  return out;
}

MomentCoefficients moment_coefficients(int n, const JumpLaw& jumps) {
  if (n < 1 || n > kMaxBellOrder) {
    fail(ErrorCode::OutOfRange, "moment order must lie in [1, 20]", "order");
  }
  MomentCoefficients mc;
  mc.order = n;
  mc.jump_derivatives = jump_derivatives(jumps, n);
  const std::span<const Rational> x(mc.jump_derivatives);
  mc.raw_coeffs.assign(n, Rational(0));
  mc.factorial_coeffs.assign(n, Rational(0));
  for (int k = 1; k <= n; ++k) {
    for (int r = k; r <= n; ++r) {
      const Rational b = bell_incomplete<Rational>(r, k, x.first(r - k + 1));
      mc.raw_coeffs[k - 1] += Rational(stirling2(n, r)) * b;
      if (r == n) mc.factorial_coeffs[k - 1] = b;
    }
  }
  return mc;
}

MomentPrediction theoretical_moments(int n, double t, const JumpLaw& jumps,
                                     const std::function<double(double)>& tau,
                                     std::span<const CEstimate> c_estimates) {
  if (!(t > 0.0)) {
    fail(ErrorCode::InvalidArgument, "t must be positive", "t");
  }
  if (static_cast<int>(c_estimates.size()) < n) {
    fail(ErrorCode::MissingEstimates,
         "need c(1..n) for n=" + std::to_string(n) + ", got " + std::to_string(c_estimates.size()),
         "c_estimates");
  }
  MomentPrediction out;
  out.coefficients = moment_coefficients(n, jumps);
  out.c_used.assign(c_estimates.begin(), c_estimates.begin() + n);

  std::vector<double> scaled(n);
  double raw_var = 0.0;
  double fac_var = 0.0;
  double previous_tau = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double tk = tau(static_cast<double>(k));
    if (!std::isfinite(tk)) {
      fail(ErrorCode::MomentDiverges, "tau(" + std::to_string(k) + ") is not finite", "tau");
    }
    if (tk <= previous_tau) {
      out.warnings.push_back("tau is not increasing at k=" + std::to_string(k) +
                             "; E Y(t)^k may be infinite");
    }
    previous_tau = tk;
    const CEstimate& c = c_estimates[k - 1];
    const double power = std::pow(t, tk);
    const double kcoef = out.coefficients.raw_coeffs[k - 1].convert_to<double>();
    const double bcoef = out.coefficients.factorial_coeffs[k - 1].convert_to<double>();
    scaled[k - 1] = kcoef * c.value;
    out.raw += kcoef * c.value * power;
    out.factorial += bcoef * c.value * power;
    raw_var += std::pow(kcoef * power * c.std_error, 2);
    fac_var += std::pow(bcoef * power * c.std_error, 2);
  }
  out.raw_stderr = std::sqrt(raw_var);
  out.factorial_stderr = std::sqrt(fac_var);
  out.coefficients.scaled_coeffs = std::move(scaled);
  return out;
}

}  // namespace imf
