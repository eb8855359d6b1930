#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"

#include "imf/io.hpp"
#include "support.hpp"

using namespace imf;
using test::thrown_code;

namespace {

std::string error_field(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("format_double round-trips") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(std::nan("")) == "nan");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<double>(i % 40) - 20.0);
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("semigroup JSON") {
  const auto j = io::json::parse(R"({"rate": 2, "offspring": {"0": 0.75, "2": 0.25}})");
  const auto spec = io::semigroup_from_json(j);
  CHECK(spec.rate == 2.0);
  CHECK(spec.offspring.at(2) == 0.25);
  CHECK(spec.label == "branching");
  const auto again = io::semigroup_from_json(io::to_json(spec));
  CHECK(again.offspring == spec.offspring);
  CHECK(again.label == spec.label);

  CHECK(error_field([] {
          io::semigroup_from_json(io::json::parse(R"({"rate": 1, "ofspring": {"0": 1}})"));
        }) == "semigroup.ofspring");
  CHECK(error_field([] {
          io::semigroup_from_json(io::json::parse(R"({"rate": 1, "offspring": {"x": 1}})"));
        }) == "semigroup.offspring");
  CHECK(thrown_code([] {
          io::semigroup_from_json(io::json::parse(R"({"rate": 1, "offspring": {"2": 1}})"));
        }) == ErrorCode::NormalizationViolated);
}

TEST_CASE("multiplier JSON") {
  for (const char* text : {R"({"kind": "constant", "alpha": 0.3})",
                           R"({"kind": "two-point", "values": [0.2, 0.8], "probabilities": [0.5, 0.5]})",
                           R"({"kind": "empirical", "values": [0.1, 0.4]})"}) {
    const auto j = io::json::parse(text);
    CHECK(io::to_json(io::multiplier_from_json(j)) == j);
  }
  CHECK(error_field([] {
          io::multiplier_from_json(io::json::parse(R"({"kind": "constant", "alpha": 0.3, "beta": 1})"));
        }) == "multiplier.beta");
  CHECK(thrown_code([] { io::multiplier_from_json(io::json::parse(R"({"kind": "beta"})")); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("cascade JSON") {
  const auto j = io::json::parse(
      R"({"kind": "lognormal", "sigma2": 0.05, "integral_scale": 50, "grid_step": 0.01})");
  const auto p = io::cascade_from_json(j);
  CHECK(p.length == 50.0);
  CHECK(p.cutoff() == 0.01);
  const auto back = io::cascade_from_json(io::to_json(p));
  CHECK(io::to_json(back) == io::to_json(p));

  const auto cp = io::cascade_from_json(io::json::parse(
      R"({"kind": "log-compound-poisson", "cp_intensity": 0.5,
          "cp_marks": {"kind": "normal", "mean": 0.1, "sd": 0.2},
          "integral_scale": 10, "grid_step": 0.01, "length": 20})"));
  CHECK(cp.kind == CascadeKind::LogCompoundPoisson);
  CHECK(io::to_json(io::cascade_from_json(io::to_json(cp))) == io::to_json(cp));

  CHECK(error_field([] {
          io::cascade_from_json(io::json::parse(
              R"({"kind": "lognormal", "sigma2": 0.05, "integral_scale": 50, "grid_step": 0.01, "lenght": 5})"));
        }) == "cascade.lenght");
  CHECK(error_field([] {
          io::cascade_from_json(io::json::parse(R"({"kind": "lognormal", "sigma2": 0.05, "grid_step": 0.01})"));
        }) == "cascade.integral_scale");
}

TEST_CASE("jump law JSON") {
  const auto law = io::jump_law_from_json(io::json::parse(R"({"pmf": {"1": 0.5, "2": 0.5}})"));
  CHECK(law.mean() == 1.5);
  CHECK(io::jump_law_from_json(io::to_json(law)).pmf == law.pmf);
}

TEST_CASE("moment prediction JSON keeps exact coefficients") {
  const auto mc = moment_coefficients(2, validate_jump_law({{1, 0.5}, {2, 0.5}}));
  const auto j = io::to_json(mc);
  CHECK(j["raw_coeffs"][0]["exact"] == "5/2");
  CHECK(j["factorial_coeffs"][1]["value"] == 2.25);
  CHECK(j["scaled_coeffs"].is_null());
}

TEST_CASE("parse_json reports syntax errors") {
  CHECK(thrown_code([] { io::parse_json("{\"a\": ", "config.json"); }) == ErrorCode::InvalidArgument);
  CHECK(thrown_code([] { io::read_json_file("/nonexistent/config.json"); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("path CSV round trip") {
  SamplePath p;
  p.times = uniform_grid(4, 0.1);
  p.values = Eigen::VectorXd::LinSpaced(5, 0.0, 1.0 / 3.0);
  std::ostringstream out;
  io::write_path_csv(out, p);
  CHECK(out.str().rfind("t,value\n0,0\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = io::read_path_csv(in);
  CHECK(back.times == p.times);
  CHECK(back.values == p.values);

  CountPath c;
  c.times = uniform_grid(3, 0.5);
  c.values = Vector<std::int64_t>(4);
  c.values << 0, 3, 3, 9007199254740993;
  std::ostringstream counts_out;
  io::write_path_csv(counts_out, c);
  CHECK(counts_out.str().find("9007199254740993") != std::string::npos);
}

TEST_CASE("CSV errors name the location") {
  std::istringstream bad_header("time,value\n0,0\n");
  CHECK(thrown_code([&] { io::read_path_csv(bad_header); }) == ErrorCode::InvalidArgument);
  std::istringstream bad_number("t,value\n0,0\n0.1,abc\n");
  CHECK(error_field([&] { io::read_path_csv(bad_number, "x.csv"); }) == "x.csv:3");
  std::istringstream extra("t,value\n0,0,1\n");
  CHECK(error_field([&] { io::read_path_csv(extra, "x.csv"); }) == "x.csv:2");
}

TEST_CASE("jump CSV round trip") {
  const JumpPath n({0.25, 1.0 / 3.0, 2.0}, {1, 4, 2}, 3.0);
  std::ostringstream out;
  io::write_jump_path_csv(out, n);
  std::istringstream in(out.str());
  const auto back = io::read_jump_path_csv(in, 3.0);
  CHECK(back.jump_times() == n.jump_times());
  CHECK(back.jump_sizes() == n.jump_sizes());
  std::istringstream bad("jump_time,jump_size\n0.5,1.5\n");
  CHECK(thrown_code([&] { io::read_jump_path_csv(bad, 3.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("estimate outputs") {
  PartitionTable table;
  table.orders = Eigen::Vector2d(1.0, 2.0);
  table.block_sizes = Eigen::Vector2d(0.5, 1.0);
  table.stats.resize(2, 2);
  table.stats << 1.0, 2.0, std::nan(""), 4.0;
  std::ostringstream out;
  io::write_partition_csv(out, table);
  CHECK(out.str() == "order,t,S\n1,0.5,1\n1,1,2\n2,0.5,nan\n2,1,4\n");

  std::ostringstream est;
  io::write_estimates_csv(est, {ScalingEstimate{2.0, 1.95, 0.1, 0.01, 7, 0.99}});
  CHECK(est.str() == "order,slope,stderr,points_used,r_squared\n2,1.95,0.01,7,0.99\n");
}
