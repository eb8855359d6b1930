#include <cmath>
#include <vector>

#include "doctest.h"

#include "imf/cascade.hpp"
#include "imf/estimation.hpp"
#include "imf/verify/oracles.hpp"
#include "support.hpp"

using namespace imf;
using test::thrown_code;

namespace {

CascadeParams lognormal(double length, double sigma2 = 0.05) {
  CascadeParams p;
  p.sigma2 = sigma2;
  p.integral_scale = 50.0;
  p.grid_step = 0.01;
  p.length = length;
  return p;
}

CascadeParams compound(double intensity, MarkLaw marks, double length = 1.0) {
  CascadeParams p;
  p.kind = CascadeKind::LogCompoundPoisson;
  p.cp_intensity = intensity;
  p.cp_marks = std::move(marks);
  p.integral_scale = 10.0;
  p.grid_step = 0.01;
  p.length = length;
  return p;
}

}  // namespace

TEST_CASE("cone measure examples") {
  CHECK(cone_measure(std::exp(1.0), 1.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(cone_measure(50.0, 0.01, 0.5) == doctest::Approx(std::log(100.0)).epsilon(1e-15));
  CHECK(cone_measure(50.0, 0.01, 50.0) == 0.0);
  CHECK(cone_measure(50.0, 0.01, 80.0) == 0.0);
  CHECK(cone_measure(50.0, 0.01, -0.5) == cone_measure(50.0, 0.01, 0.5));
  CHECK(thrown_code([] { cone_measure(1.0, 1.0, 0.0); }) == ErrorCode::InvalidCutoffs);
  CHECK(thrown_code([] { cone_measure(1.0, 0.0, 0.0); }) == ErrorCode::InvalidCutoffs);
}

TEST_CASE("cone measure is continuous, nonincreasing and matches quadrature") {
  for (auto [T, l] : {std::pair{50.0, 0.01}, std::pair{3.0, 0.7}, std::pair{1.0, 0.999}}) {
    double previous = cone_measure(T, l, 0.0);
    for (double lag = 0.0; lag <= 1.2 * T; lag += T / 97.0) {
      const double m = cone_measure(T, l, lag);
      CHECK(m <= previous + 1e-15);
      CHECK(m >= 0.0);
      CHECK(std::abs(m - verify::cone_measure_by_quadrature(T, l, lag)) < 1e-9);
      previous = m;
    }
    CHECK(cone_measure(T, l, l) == doctest::Approx(std::log(T / l)));
  }
}

TEST_CASE("laplace exponent and scaling function") {
  const auto ln = lognormal(1.0);
  CHECK(laplace_exponent(ln, 1.0) == doctest::Approx(0.0));
  CHECK(laplace_exponent(ln, 2.0) == doctest::Approx(0.05));
  CHECK(scaling_function(ln, 0.0) == 0.0);
  CHECK(scaling_function(ln, 1.0) == doctest::Approx(1.0));
  CHECK(scaling_function(ln, 2.0) == doctest::Approx(1.95));
  for (double q = 0.0; q <= 4.0; q += 0.25) {
    CHECK(scaling_function(ln, q) == doctest::Approx(q * 1.025 - 0.025 * q * q));
  }

  const auto cp = compound(1.0, MarkLaw::point(std::log(2.0)));
  CHECK(drift(cp) == doctest::Approx(-1.0));
  CHECK(laplace_exponent(cp, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(laplace_exponent(cp, 2.0) == doctest::Approx(1.0));
  CHECK(scaling_function(cp, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("mark law moments") {
  MarkLaw normal{MarkLaw::Normal{0.1, 0.3}};
  CHECK(normal.moment(2.0) == doctest::Approx(std::exp(0.2 + 0.5 * 4.0 * 0.09)));
  MarkLaw expo{MarkLaw::Exponential{3.0}};
  CHECK(expo.moment(1.0) == doctest::Approx(1.5));
  CHECK(expo.moment_threshold() == 3.0);
  CHECK(thrown_code([&] { expo.moment(3.0); }) == ErrorCode::MomentDiverges);
  const auto cp = compound(1.0, expo);
  CHECK(thrown_code([&] { scaling_function(cp, 3.5); }) == ErrorCode::MomentDiverges);
  const auto heavy = compound(1.0, MarkLaw{MarkLaw::Exponential{0.8}});
  CHECK(thrown_code([&] { validate(heavy); }) == ErrorCode::MomentDiverges);
}

TEST_CASE("parameter validation") {
  auto p = lognormal(1.0);
  p.truncation = 60.0;
  CHECK(thrown_code([&] { validate(p); }) == ErrorCode::InvalidCutoffs);
  p = lognormal(1.0);
  p.sigma2 = -0.1;
  CHECK(thrown_code([&] { validate(p); }) == ErrorCode::InvalidArgument);
  p = lognormal(0.001);
  CHECK(thrown_code([&] { validate(p); }) == ErrorCode::InvalidArgument);
  CHECK(lognormal(1.0).cutoff() == 0.01);
}

TEST_CASE("degenerate fields give the identity clock") {
  Rng rng = make_stream(30, 0);
  const auto flat = simulate_cascade(lognormal(5.0, 0.0), rng);
  CHECK(flat.values.size() == 501);
  CHECK((flat.values.array() == flat.times.array()).all());

  const auto empty = simulate_cascade(compound(0.0, MarkLaw::point(0.3), 5.0), rng);
  CHECK((empty.values.array() == empty.times.array()).all());
}

TEST_CASE("clocks are nondecreasing from zero") {
  for (const auto& params :
       {lognormal(20.0), compound(0.5, MarkLaw{MarkLaw::Normal{0.1, 0.2}}, 20.0)}) {
    const CascadeSimulator sim(params);
    for (std::uint64_t r = 0; r < 20; ++r) {
      Rng rng = make_stream(31, r);
      const auto y = sim.path(rng);
      CHECK(y.values[0] == 0.0);
      CHECK(is_nondecreasing(y));
      CHECK(y.times.size() == params.cells() + 1);
    }
  }
}

TEST_CASE("derived drift normalizes E exp(omega)") {
  const CascadeParams cases[] = {
      lognormal(1.0),
      compound(0.5, MarkLaw{MarkLaw::Normal{0.1, 0.2}}),
      compound(0.3, MarkLaw{MarkLaw::PointMasses{{-0.2, 0.3}, {0.5, 0.5}}}),
  };
  for (const auto& params : cases) {
    const CascadeSimulator sim(params);
    std::vector<double> w;
    for (std::uint64_t r = 0; r < 10000; ++r) {
      Rng rng = make_stream(32, r);
      w.push_back(std::exp(sim.log_field(rng)[50]));
    }
    const auto m = test::mean_se(w);
    CHECK(std::abs(m.mean - 1.0) < 3.0 * m.se);
  }
}

TEST_CASE("log-normal field covariance, embedding and dense") {
  const auto params = lognormal(2.0);
  CascadeOptions dense;
  dense.force_dense = true;
  const CascadeSimulator fast(params);
  const CascadeSimulator slow(params, dense);
  CHECK(fast.uses_embedding());
  CHECK_FALSE(slow.uses_embedding());

  const double rho0 = cone_measure(50.0, 0.01, 0.0);
  const double rho1 = cone_measure(50.0, 0.01, 1.0);
  for (const auto* sim : {&fast, &slow}) {
    std::vector<double> a;
    std::vector<double> b;
    for (std::uint64_t r = 0; r < 4000; ++r) {
      Rng rng = make_stream(33, r);
      const auto f = sim->log_field(rng);
      a.push_back(f[10]);
      b.push_back(f[110]);
    }
    const auto ma = test::mean_se(a);
    CHECK(std::abs(ma.mean + 0.025 * rho0) < 4.0 * ma.se);
    double var = 0.0;
    double cov = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      var += (a[i] - ma.mean) * (a[i] - ma.mean);
      cov += (a[i] - ma.mean) * (b[i] - ma.mean);
    }
    var /= static_cast<double>(a.size() - 1);
    cov /= static_cast<double>(a.size() - 1);
    const double target_var = 0.05 * rho0;
    const double rel_se = std::sqrt(2.0 / static_cast<double>(a.size()));
    CHECK(std::abs(var - target_var) < 4.0 * rel_se * target_var);
    CHECK(std::abs(cov - 0.05 * rho1) < 4.0 * rel_se * target_var);
  }
}

TEST_CASE("dense fallback refuses large grids") {
  CascadeOptions options;
  options.force_dense = true;
  options.max_dense_size = 100;
  CHECK(thrown_code([&] { CascadeSimulator(lognormal(2.0), options); }) ==
        ErrorCode::EmbeddingFailure);
}

TEST_CASE("intensity cap") {
  CascadeOptions options;
  options.max_expected_points = 100.0;
  Rng rng = make_stream(34, 0);
  CHECK(thrown_code([&] {
          simulate_cascade(compound(1.0, MarkLaw::point(0.1)), rng, options);
        }) == ErrorCode::IntensityOverflow);
}

TEST_CASE("increments are stationary") {
  for (const auto& params :
       {lognormal(20.0), compound(0.5, MarkLaw{MarkLaw::Normal{0.1, 0.2}}, 20.0)}) {
    const CascadeSimulator sim(params);
    std::vector<double> first;
    std::vector<double> later;
    for (std::uint64_t r = 0; r < 1000; ++r) {
      Rng rng = make_stream(35, r);
      const auto y = sim.path(rng);
      first.push_back(y.values[100] - y.values[0]);
      later.push_back(y.values[1600] - y.values[1500]);
    }
    CHECK(verify::ks_two_sample(first, later).p_value > 0.01);
  }
}

TEST_CASE("clock moments scale with tau") {
  const auto params = lognormal(50.0);
  const CascadeSimulator sim(params);
  Eigen::VectorXd blocks(6);
  blocks << 0.1, 0.2, 0.4, 0.8, 1.6, 3.2;
  const Eigen::Vector2d orders(1.0, 2.0);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(2, blocks.size());
  const int paths = 100;
  for (int r = 0; r < paths; ++r) {
    Rng rng = make_stream(36, r);
    sum += partition_function(sim.path(rng), orders, blocks, MomentMode::Absolute).stats;
  }
  for (int i = 0; i < 2; ++i) {
    const Eigen::VectorXd log_s = (sum.row(i) / paths).array().log().transpose();
    const auto fit = fit_log_log(blocks.array().log(), log_s, orders[i]);
    CHECK(std::abs(fit.slope - scaling_function(params, orders[i])) < 0.1);
  }
}
