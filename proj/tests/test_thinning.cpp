#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "imf/thinning.hpp"
#include "imf/verify/oracles.hpp"
#include "support.hpp"

using namespace imf;
using test::thrown_code;

namespace {

SemigroupSpec quadratic() { return validate_spec(2.0, {{0, 0.75}, {2, 0.25}}); }

CountPath count_path(std::vector<std::int64_t> values) {
  CountPath p;
  p.times = uniform_grid(static_cast<Eigen::Index>(values.size()) - 1, 1.0);
  p.values = Eigen::Map<Vector<std::int64_t>>(values.data(), static_cast<Eigen::Index>(values.size()));
  return p;
}

}  // namespace

TEST_CASE("thin_value of zero is zero") {
  Rng rng = make_stream(10, 0);
  CHECK(thin_value(binomial_semigroup(), 0.3, 0, rng) == 0);
  CHECK(thin_value(quadratic(), 0.3, 0, rng) == 0);
}

TEST_CASE("binomial thinning of 10 has mean 3") {
  Rng rng = make_stream(11, 0);
  std::vector<double> v;
  for (int i = 0; i < 100000; ++i) {
    const auto y = thin_value(binomial_semigroup(), 0.3, 10, rng);
    CHECK_LE(y, 10);
    v.push_back(static_cast<double>(y));
  }
  const auto m = test::mean_se(v);
  CHECK(std::abs(m.mean - 3.0) < 3.0 * m.se);
}

TEST_CASE("thinning a Poisson variable composes pgfs") {
  // P_X(F_s(z)) with X ~ Poisson(5): exp(-5 (1 - F_s(z))).
  Rng rng = make_stream(12, 0);
  std::poisson_distribution<std::int64_t> pois(5.0);
  const double alpha = 0.5;
  for (const auto& spec : {binomial_semigroup(), quadratic()}) {
    std::vector<std::int64_t> out;
    for (int i = 0; i < 100000; ++i) out.push_back(thin_value(spec, alpha, pois(rng), rng));
    for (double z : {0.2, 0.5, 0.8}) {
      const auto e = verify::empirical_pgf(out, z);
      const double expected =
          std::exp(-5.0 * semigroup_complement(spec, -std::log(alpha), z));
      CHECK(std::abs(e.mean - expected) < 3.0 * e.std_error);
    }
  }
}

TEST_CASE("multiplier validation") {
  CHECK(thrown_code([] { MultiplierSampler::constant(0.0); }) == ErrorCode::InvalidArgument);
  CHECK(thrown_code([] { MultiplierSampler::constant(1.5); }) == ErrorCode::InvalidArgument);
  CHECK_FALSE(thrown_code([] { MultiplierSampler::constant(1.0); }));
  CHECK(thrown_code([] { MultiplierSampler::two_point({0.2, 1.0}, {0.5, 0.5}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(thrown_code([] { MultiplierSampler::two_point({0.2, 0.4}, {0.5, 0.6}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(thrown_code([] { MultiplierSampler::empirical({}); }) == ErrorCode::InvalidArgument);
  CHECK(thrown_code([] { MultiplierSampler::empirical({0.5, 0.0}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("multiplier draws stay in the support") {
  Rng rng = make_stream(13, 0);
  const auto two = MultiplierSampler::two_point({0.25, 0.75}, {0.3, 0.7});
  const auto emp = MultiplierSampler::empirical({0.1, 0.2, 0.9});
  int high = 0;
  for (int i = 0; i < 10000; ++i) {
    const double a = two.draw(rng);
    CHECK((a == 0.25 || a == 0.75));
    high += a == 0.75;
    const double b = emp.draw(rng);
    CHECK((b == 0.1 || b == 0.2 || b == 0.9));
  }
  CHECK(std::abs(high / 10000.0 - 0.7) < 0.02);
}

TEST_CASE("thin_path with alpha = 1 is the identity") {
  Rng rng = make_stream(14, 0);
  const auto path = count_path({0, 2, 2, 5, 9});
  const auto out = thin_path(quadratic(), MultiplierSampler::constant(1.0), path, rng);
  CHECK(out.values == path.values);
  CHECK(out.multiplier_used == 1.0);
  CHECK(out.source_max == 9);
}

TEST_CASE("thin_path keeps nondecreasing paths nondecreasing") {
  const auto path = count_path({0, 2, 2, 5});
  const auto a = MultiplierSampler::two_point({0.25, 0.75}, {0.5, 0.5});
  for (std::uint64_t r = 0; r < 200; ++r) {
    Rng rng = make_stream(15, r);
    for (const auto& spec : {binomial_semigroup(), quadratic()}) {
      const auto out = thin_path(spec, a, path, rng);
      CHECK(is_nondecreasing(out.as_path()));
      CHECK(out.values[0] == 0);
      // Equal inputs share the same partial sum of the single family.
      CHECK(out.values[1] == out.values[2]);
    }
  }
}

TEST_CASE("binomial thin_path never exceeds its input") {
  const auto path = count_path({3, 0, 7, 1, 12, 4});
  for (std::uint64_t r = 0; r < 200; ++r) {
    Rng rng = make_stream(16, r);
    const auto out = thin_path(binomial_semigroup(), MultiplierSampler::constant(0.4), path, rng);
    for (Eigen::Index i = 0; i < path.values.size(); ++i) CHECK(out.values[i] <= path.values[i]);
  }
}

TEST_CASE("constant path stays constant") {
  const auto path = count_path({6, 6, 6, 6, 6});
  Rng rng = make_stream(17, 0);
  for (int k = 0; k < 50; ++k) {
    const auto out = thin_path(quadratic(), MultiplierSampler::constant(0.3), path, rng);
    CHECK((out.values.array() == out.values[0]).all());
  }
}

TEST_CASE("thin_path rejects non-integer or negative paths") {
  SamplePath real;
  real.times = uniform_grid(2, 1.0);
  real.values = Eigen::Vector3d(0.0, 1.5, 2.0);
  Rng rng = make_stream(18, 0);
  const auto a = MultiplierSampler::constant(0.5);
  CHECK(thrown_code([&] { thin_path(quadratic(), a, real, rng); }) == ErrorCode::NonIntegerPath);
  CHECK(thrown_code([&] { thin_path(quadratic(), a, count_path({0, -1}), rng); }) ==
        ErrorCode::NonIntegerPath);
}

TEST_CASE("composition with random multipliers") {
  // A (.) (B (.) X) against (AB) (.) X with independent A, B.
  const auto a = MultiplierSampler::two_point({0.3, 0.9}, {0.5, 0.5});
  const auto b = MultiplierSampler::two_point({0.5, 0.8}, {0.4, 0.6});
  Rng left_rng = make_stream(19, 0);
  Rng right_rng = make_stream(19, 1);
  std::poisson_distribution<std::int64_t> pois(5.0);
  std::vector<std::int64_t> left;
  std::vector<std::int64_t> right;
  for (int i = 0; i < 200000; ++i) {
    const auto inner = thin_value(quadratic(), b, pois(left_rng), left_rng);
    left.push_back(thin_value(quadratic(), a, inner, left_rng));
    const double ab = a.draw(right_rng) * b.draw(right_rng);
    right.push_back(thin_value(quadratic(), ab, pois(right_rng), right_rng));
  }
  CHECK(verify::chi_square_two_sample(left, right).p_value > 0.01);
}

TEST_CASE("thin_path composition at a fixed time") {
  // The path a (.) (b (.) X) against 0.3 (.) X at one time point.
  const auto path = count_path({0, 1, 3, 4, 6, 8, 9});
  Rng left_rng = make_stream(20, 0);
  Rng right_rng = make_stream(20, 1);
  std::vector<std::int64_t> left;
  std::vector<std::int64_t> right;
  for (int i = 0; i < 50000; ++i) {
    const auto inner = thin_path(quadratic(), MultiplierSampler::constant(0.6), path, left_rng);
    const auto outer =
        thin_path(quadratic(), MultiplierSampler::constant(0.5), inner.as_path(), left_rng);
    left.push_back(outer.values[5]);
    right.push_back(
        thin_path(quadratic(), MultiplierSampler::constant(0.3), path, right_rng).values[5]);
  }
  CHECK(verify::chi_square_two_sample(left, right).p_value > 0.01);
}
