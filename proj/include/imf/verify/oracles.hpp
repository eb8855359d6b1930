#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "imf/combinatorics.hpp"
#include "imf/semigroup.hpp"

// Reference computations that share no code path with the library routines
// they check: brute-force enumeration, adaptive quadrature and adaptive ODE
// integration, and classical goodness-of-fit tests.
namespace imf::verify {

struct TestResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Chi-square goodness of fit of integer samples against a pmf on {0, 1, ...}.
/// Adjacent cells are merged until each expects at least 5 counts; the last
/// cell absorbs the upper tail.
TestResult chi_square_gof(std::span<const std::int64_t> samples,
                          const std::function<double(std::int64_t)>& pmf);

/// Two-sample chi-square homogeneity test on integer samples, with cells
/// merged until every expected count is at least 5.
TestResult chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Mean and standard error of z^X over the samples.
struct PgfEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};
PgfEstimate empirical_pgf(std::span<const std::int64_t> samples, double z);

/// Poisson(mean) pmf at k, by the log-gamma form.
double poisson_pmf(std::int64_t k, double mean);

/// E X^n for X ~ Poisson(mean), by direct summation of the pmf.
double poisson_raw_moment_by_summation(int n, double mean);

/// All set partitions of {0, ..., n-1} as restricted growth strings.
std::vector<std::vector<int>> set_partitions(int n);

/// {n r} by counting set partitions with r blocks.
BigInt stirling2_by_enumeration(int n, int r);

/// B_{r,k}(x) as the sum over partitions of r elements into k blocks of the
/// product of x_{block size}.
Rational bell_by_enumeration(int r, int k, std::span<const Rational> x);

/// Measure of the intersection of the cones A_l(0) and A_l(lag) under
/// v^{-2} du dv. The inner u-integral is the overlap length of the two
/// cone cross-sections; the outer v-integral uses adaptive quadrature.
double cone_measure_by_quadrature(double integral_scale, double truncation, double lag);

/// F_s(z) from an adaptive Dormand-Prince integration of dF/ds = rate (h(F) - F)
/// in F itself, with tolerance `tol`.
double semigroup_by_adaptive_ode(const SemigroupSpec& spec, double s, double z, double tol = 1e-13);

}  // namespace imf::verify
