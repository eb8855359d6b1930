#include "imf/verify/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "imf/error.hpp"

namespace imf::verify {

namespace {

double chi_square_tail(double statistic, int dof) {
  if (dof < 1) return 1.0;
  const boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

struct Cell {
  double observed = 0.0;
  double expected = 0.0;
};

}  // namespace

TestResult chi_square_gof(std::span<const std::int64_t> samples,
                          const std::function<double(std::int64_t)>& pmf) {
  if (samples.empty()) {
    fail(ErrorCode::EmptySample, "no samples", "samples");
  }
  const auto n = static_cast<double>(samples.size());
  const std::int64_t top = *std::max_element(samples.begin(), samples.end());
  std::vector<double> observed(static_cast<std::size_t>(top) + 1, 0.0);
  for (auto x : samples) {
    if (x < 0) fail(ErrorCode::InvalidArgument, "negative sample", "samples");
    observed[x] += 1.0;
  }

  std::vector<Cell> cells;
  Cell open;
  double mass = 0.0;
  for (std::int64_t k = 0; k <= top; ++k) {
    const double p = pmf(k);
    mass += p;
    open.observed += observed[k];
    open.expected += n * p;
    if (open.expected >= 5.0) {
      cells.push_back(open);
      open = Cell{};
    }
  }
  open.expected += n * std::max(0.0, 1.0 - mass);
  if (cells.empty() || open.expected >= 5.0) {
    cells.push_back(open);
  } else {
    cells.back().observed += open.observed;
    cells.back().expected += open.expected;
  }

  TestResult out;
  for (const auto& c : cells) {
    if (c.expected > 0.0) {
      out.statistic += (c.observed - c.expected) * (c.observed - c.expected) / c.expected;
    }
  }
  out.dof = static_cast<int>(cells.size()) - 1;
  out.p_value = chi_square_tail(out.statistic, out.dof);
  return out;
}

TestResult chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.empty() || b.empty()) {
    fail(ErrorCode::EmptySample, "both samples must be nonempty", "samples");
  }
  std::map<std::int64_t, std::array<double, 2>> counts;
  for (auto x : a) counts[x][0] += 1.0;
  for (auto x : b) counts[x][1] += 1.0;
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  const double share_a = na / (na + nb);

  std::vector<std::array<double, 2>> cells;
  std::array<double, 2> open{0.0, 0.0};
  for (const auto& [value, c] : counts) {
    open[0] += c[0];
    open[1] += c[1];
    const double pooled = open[0] + open[1];
    if (std::min(pooled * share_a, pooled * (1.0 - share_a)) >= 5.0) {
      cells.push_back(open);
      open = {0.0, 0.0};
    }
  }
  if (cells.empty()) {
    cells.push_back(open);
  } else {
    cells.back()[0] += open[0];
    cells.back()[1] += open[1];
  }

  TestResult out;
  for (const auto& c : cells) {
    const double pooled = c[0] + c[1];
    const double ea = pooled * share_a;
    const double eb = pooled * (1.0 - share_a);
    out.statistic += (c[0] - ea) * (c[0] - ea) / ea + (c[1] - eb) * (c[1] - eb) / eb;
  }
  out.dof = static_cast<int>(cells.size()) - 1;
  out.p_value = chi_square_tail(out.statistic, out.dof);
  return out;
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    fail(ErrorCode::EmptySample, "both samples must be nonempty", "samples");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }

  // Asymptotic Kolmogorov tail with the usual small-sample correction.
  const double en = std::sqrt(na * nb / (na + nb));
  const double lambda = (en + 0.12 + 0.11 / en) * d;
  double q = 0.0;
  if (lambda < 0.2) {
    q = 1.0;
  } else {
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
      q += 2.0 * sign * std::exp(-2.0 * k * k * lambda * lambda);
      sign = -sign;
    }
  }
  return TestResult{d, 0, std::clamp(q, 0.0, 1.0)};
}

PgfEstimate empirical_pgf(std::span<const std::int64_t> samples, double z) {
  if (samples.empty()) {
    fail(ErrorCode::EmptySample, "no samples", "samples");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (auto x : samples) {
    const double v = std::pow(z, static_cast<double>(x));
    sum += v;
    sum_sq += v * v;
  }
  const auto n = static_cast<double>(samples.size());
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return PgfEstimate{mean, std::sqrt(var / n)};
}

double poisson_pmf(std::int64_t k, double mean) {
  if (k < 0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  const auto kd = static_cast<double>(k);
  return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
}

double poisson_raw_moment_by_summation(int n, double mean) {
  double total = 0.0;
  for (std::int64_t x = 0; x < 100000; ++x) {
    const double term = std::pow(static_cast<double>(x), n) * poisson_pmf(x, mean);
    total += term;
    if (static_cast<double>(x) > mean && term < 1e-20 * total) break;
  }
  return total;
}

std::vector<std::vector<int>> set_partitions(int n) {
  std::vector<std::vector<int>> out;
  if (n <= 0) return out;
  std::vector<int> growth(n, 0);
  // growth[i] <= 1 + max(growth[0..i-1])
  std::function<void(int, int)> extend = [&](int i, int blocks) {
    if (i == n) {
      out.push_back(growth);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      growth[i] = b;
      extend(i + 1, std::max(blocks, b + 1));
    }
  };
  growth[0] = 0;
  extend(1, 1);
  return out;
}

BigInt stirling2_by_enumeration(int n, int r) {
  BigInt count = 0;
  for (const auto& p : set_partitions(n)) {
    if (*std::max_element(p.begin(), p.end()) + 1 == r) ++count;
  }
  return count;
}

Rational bell_by_enumeration(int r, int k, std::span<const Rational> x) {
  Rational total = 0;
  for (const auto& p : set_partitions(r)) {
    if (*std::max_element(p.begin(), p.end()) + 1 != k) continue;
    std::vector<int> sizes(k, 0);
    for (int b : p) ++sizes[b];
    Rational term = 1;
    for (int s : sizes) term *= x[s - 1];
    total += term;
  }
  return total;
}

double cone_measure_by_quadrature(double integral_scale, double truncation, double lag) {
  const double T = integral_scale;
  const double l = truncation;
  const double h = std::abs(lag);
  // Cross-section of A_l(c) at height v is [c - f(v)/2, c + f(v)/2].
  auto overlap = [&](double v) {
    const double f = std::min(v, T);
    const double lo = std::max(-0.5 * f, h - 0.5 * f);
    const double hi = std::min(0.5 * f, h + 0.5 * f);
    return std::max(0.0, hi - lo);
  };
  using boost::math::quadrature::gauss_kronrod;
  auto integrand = [&](double v) { return overlap(v) / (v * v); };

  std::vector<double> breaks{l, T};
  if (h > l && h < T) breaks.push_back(h);
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += gauss_kronrod<double, 31>::integrate(integrand, breaks[i], breaks[i + 1], 15, 1e-14);
  }
  // v in [T, inf) through w = 1/v.
  auto tail = [&](double w) { return w > 0.0 ? overlap(1.0 / w) : overlap(T); };
  total += gauss_kronrod<double, 31>::integrate(tail, 0.0, 1.0 / T, 15, 1e-14);
  return total;
}

double semigroup_by_adaptive_ode(const SemigroupSpec& spec, double s, double z, double tol) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 1>;
  auto rhs = [&spec](const State& f, State& dfds, double) {
    double h = 0.0;
    for (const auto& [k, p] : spec.offspring) h += p * std::pow(f[0], k);
    dfds[0] = spec.rate * (h - f[0]);
  };
  State f{z};
  if (s == 0.0) return z;
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_adaptive(stepper, rhs, f, 0.0, s, 1e-4);
  return f[0];
}

}  // namespace imf::verify
