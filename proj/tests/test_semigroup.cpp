#include <cmath>
#include <vector>

#include "doctest.h"

#include "imf/error.hpp"
#include "imf/semigroup.hpp"
#include "imf/verify/oracles.hpp"
#include "support.hpp"

using namespace imf;

namespace {

SemigroupSpec quadratic() { return validate_spec(2.0, {{0, 0.75}, {2, 0.25}}); }

// For rate 2 and offspring {0: 3/4, 2: 1/4}, u = 1 - F solves u' = -u - u^2/2,
// so 1/u_s = (1/u_0 + 1/2) e^s - 1/2, and G(z) = 2z / (3 - z).
double quadratic_closed(double s, double z) {
  const double u0 = 1.0 - z;
  if (u0 == 0.0) return 1.0;
  return 1.0 - 1.0 / ((1.0 / u0 + 0.5) * std::exp(s) - 0.5);
}

double quadratic_g(double z) { return 2.0 * z / (3.0 - z); }

using test::thrown_code;

}  // namespace

TEST_CASE("validate_spec accepts normalized mechanisms") {
  const auto b = validate_spec(1.0, {{0, 1.0}});
  CHECK(b.is_binomial());
  CHECK(b.label == "binomial");
  const auto q = quadratic();
  CHECK(q.offspring_mean() == doctest::Approx(0.5));
  CHECK(q.rate * (1.0 - q.offspring_mean()) == doctest::Approx(1.0));
  CHECK(q.label == "branching");
}

TEST_CASE("validate_spec rejects invalid mechanisms") {
  CHECK(thrown_code([] { validate_spec(1.0, {{2, 1.0}}); }) == ErrorCode::NormalizationViolated);
  CHECK(thrown_code([] { validate_spec(1.0, {{1, 1.0}}); }) == ErrorCode::DegenerateSemigroup);
  CHECK(thrown_code([] { validate_spec(1.0, {{0, 0.5}}); }) == ErrorCode::NotAPgf);
  CHECK(thrown_code([] { validate_spec(1.0, {{0, 1.5}, {1, -0.5}}); }) == ErrorCode::NotAPgf);
  CHECK(thrown_code([] { validate_spec(-1.0, {{0, 1.0}}); }) == ErrorCode::InvalidArgument);
  CHECK(thrown_code([] { validate_spec(2.0, {{0, 0.75}, {2, 0.25}}, "binomial"); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("eval_semigroup examples") {
  const auto b = binomial_semigroup();
  CHECK(eval_semigroup(b, std::log(2.0), 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval_semigroup(b, 0.0, 0.37) == 0.37);
  CHECK(eval_semigroup(quadratic(), 0.0, 0.37) == 0.37);

  const double ref = verify::semigroup_by_adaptive_ode(quadratic(), 1.0, 0.5);
  CHECK(std::abs(eval_semigroup(quadratic(), 1.0, 0.5) - ref) < 1e-8);
}

TEST_CASE("RK4 matches the closed form of the quadratic mechanism") {
  double worst = 0.0;
  for (double s : {0.01, 0.3, 1.0, 2.5, 10.0}) {
    for (double z = 0.0; z <= 1.0; z += 0.125) {
      worst = std::max(worst, std::abs(eval_semigroup(quadratic(), s, z) - quadratic_closed(s, z)));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("complement keeps relative precision near 1") {
  // 1 - F_s(0) = 1 / (1.5 e^s - 0.5)
  for (double s : {20.0, 40.0}) {
    const double expected = 1.0 / (1.5 * std::exp(s) - 0.5);
    CHECK(semigroup_complement(quadratic(), s, 0.0) == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("semigroup law") {
  for (const auto& spec : {binomial_semigroup(), quadratic()}) {
    double worst = 0.0;
    for (double s : {0.3, 0.7, 1.1}) {
      for (double t : {0.3, 0.7, 1.1}) {
        for (double z = 0.0; z <= 1.0; z += 0.1) {
          const double lhs = eval_semigroup(spec, s, eval_semigroup(spec, t, z));
          worst = std::max(worst, std::abs(lhs - eval_semigroup(spec, s + t, z)));
        }
      }
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("mean decays as exp(-s)") {
  const double h = 1e-7;
  for (double s : {0.5, 1.0, 2.0}) {
    const double derivative = semigroup_complement(quadratic(), s, 1.0 - h) / h;
    CHECK(std::abs(derivative - std::exp(-s)) < 1e-5);
  }
}

TEST_CASE("F_s is nondecreasing in z and stays in [z, 1]") {
  double previous = -1.0;
  for (double z = 0.0; z <= 1.0; z += 0.05) {
    const double f = eval_semigroup(quadratic(), 0.8, z);
    CHECK(f >= previous);
    CHECK(f >= z - 1e-15);
    CHECK(f <= 1.0);
    previous = f;
  }
}

TEST_CASE("extract_limit_pgf") {
  CHECK(extract_limit_pgf(binomial_semigroup(), 0.5) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(extract_limit_pgf(quadratic(), 1.0) == 1.0);
  CHECK(extract_limit_pgf(quadratic(), 0.0) == 0.0);
  CHECK(std::abs(extract_limit_pgf(quadratic(), 0.5) - 0.4) < 1e-9);
  for (double z : {0.1, 0.35, 0.8, 0.99}) {
    CHECK(std::abs(extract_limit_pgf(quadratic(), z) - quadratic_g(z)) < 1e-9);
  }
}

TEST_CASE("Abel property of the limit pgf") {
  const double v = extract_limit_pgf(quadratic(), 0.5);
  const double g_f1 = extract_limit_pgf(quadratic(), eval_semigroup(quadratic(), 1.0, 0.5));
  CHECK(std::abs((1.0 - g_f1) - std::exp(-1.0) * (1.0 - v)) < 1e-6);

  for (double t : {0.5, 1.0, 2.0}) {
    for (double z : {0.2, 0.5, 0.8}) {
      const double lhs = 1.0 - extract_limit_pgf(quadratic(), eval_semigroup(quadratic(), t, z));
      const double rhs = std::exp(-t) * (1.0 - extract_limit_pgf(quadratic(), z));
      CHECK(std::abs(lhs - rhs) < 1e-5);
    }
  }
}

TEST_CASE("extract_limit_pgf reports non-convergence") {
  CHECK(thrown_code([] { extract_limit_pgf(quadratic(), 0.5, 0.05, 1e-12); }) ==
        ErrorCode::NotConverged);
}

TEST_CASE("simulate_branching trivial cases") {
  Rng rng = make_stream(1, 0);
  CHECK(simulate_branching(quadratic(), 1, 0.0, rng).population == 1);
  CHECK(simulate_branching(quadratic(), 0, 3.0, rng).population == 0);
  const auto s = simulate_branching(quadratic(), 7, 0.0, rng);
  CHECK(s.initial == 7);
  CHECK(s.elapsed == 0.0);
  CHECK(s.population == 7);
}

TEST_CASE("pure-death survival and mean") {
  const auto b = binomial_semigroup();
  Rng rng = make_stream(2, 0);
  const int n = 100000;
  std::vector<double> alive;
  std::vector<double> pop;
  for (int i = 0; i < n; ++i) {
    alive.push_back(simulate_branching(b, 1, 0.7, rng).population == 1 ? 1.0 : 0.0);
    pop.push_back(static_cast<double>(simulate_branching(b, 1, 1.0, rng).population));
  }
  const auto a = test::mean_se(alive);
  CHECK(std::abs(a.mean - std::exp(-0.7)) < 3.0 * a.se);
  const auto m = test::mean_se(pop);
  CHECK(std::abs(m.mean - std::exp(-1.0)) < 3.0 * m.se);
}

TEST_CASE("branching simulation has pgf F_s") {
  Rng rng = make_stream(3, 0);
  for (std::int64_t initial : {1, 3}) {
    std::vector<std::int64_t> pops;
    for (int i = 0; i < 100000; ++i) {
      pops.push_back(simulate_branching(quadratic(), initial, 0.7, rng).population);
    }
    for (double z : {0.2, 0.5, 0.8}) {
      const auto e = verify::empirical_pgf(pops, z);
      const double expected = std::pow(eval_semigroup(quadratic(), 0.7, z), initial);
      CHECK(std::abs(e.mean - expected) < 3.0 * e.std_error);
    }
  }
}

TEST_CASE("population cap") {
  SemigroupSpec supercritical;
  supercritical.rate = 1.0;
  supercritical.offspring = {{2, 1.0}};
  supercritical.label = "unchecked";
  Rng rng = make_stream(4, 0);
  BranchingOptions options;
  options.max_population = 1000;
  CHECK(thrown_code([&] { simulate_branching(supercritical, 1, 50.0, rng, options); }) ==
        ErrorCode::PopulationOverflow);
}
