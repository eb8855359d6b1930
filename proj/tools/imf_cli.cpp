// Command-line front end: simulation, thinning, moments, estimation, verify.
//
// Exit status: 0 on success, 2 on missing or invalid input, 1 on numerical
// failure (and on failed verification).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "imf/cascade.hpp"
#include "imf/combinatorics.hpp"
#include "imf/count.hpp"
#include "imf/error.hpp"
#include "imf/estimation.hpp"
#include "imf/io.hpp"
#include "imf/random.hpp"
#include "imf/semigroup.hpp"
#include "imf/thinning.hpp"
#include "imf/verify/acceptance.hpp"

namespace {

using imf::ErrorCode;
using imf::fail;
using imf::io::json;
namespace fs = std::filesystem;

struct Common {
  std::uint64_t seed = 0;
  std::string output;
  int replicates = 1;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed, "Master seed (64-bit unsigned)")->required();
  cmd->add_option("--output", common.output, "Output file")->required();
  cmd->add_option("--replicates", common.replicates, "Number of independent replicates")
      ->check(CLI::PositiveNumber);
}

void require_single(const Common& common, const char* command) {
  if (common.replicates != 1) {
    fail(ErrorCode::InvalidArgument, std::string(command) + " takes a single replicate",
         "--replicates");
  }
}

// "out.csv" -> "out_r3.csv" when several replicates are written.
std::string replicate_path(const std::string& path, int r, int count) {
  if (count == 1) return path;
  const fs::path p(path);
  return (p.parent_path() / (p.stem().string() + "_r" + std::to_string(r) + p.extension().string()))
      .string();
}

// Runs job(r) for r = 0..count-1 on worker threads. Results come back in
// replicate order; the first failure (by replicate index) is rethrown.
template <typename T, typename Job>
std::vector<T> run_replicates(int count, Job job) {
  std::vector<T> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < count; r = next++) {
      try {
        results[r] = job(r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const int threads =
      std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(count, 1));
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

template <typename Path>
std::string path_csv(const Path& path) {
  std::ostringstream os;
  imf::io::write_path_csv(os, path);
  return os.str();
}

imf::SamplePath read_path(const std::string& file) {
  std::istringstream in(imf::io::read_text_file(file));
  return imf::io::read_path_csv(in, file);
}

// --- simulate-cascade -------------------------------------------------------

struct CascadeArgs {
  Common common;
  std::string config;
};

int simulate_cascade(const CascadeArgs& args) {
  const auto params = imf::io::cascade_from_json(imf::io::read_json_file(args.config));
  const imf::CascadeSimulator sim(params);
  const int n = args.common.replicates;
  const auto files = run_replicates<std::string>(n, [&](int r) {
    imf::Rng rng = imf::make_stream(args.common.seed, static_cast<std::uint64_t>(r));
    return path_csv(sim.path(rng));
  });
  for (int r = 0; r < n; ++r) {
    imf::io::write_text_file(replicate_path(args.common.output, r, n), files[r]);
  }
  std::cout << "wrote " << n << " cascade path(s), " << params.cells() + 1 << " points each\n";
  return 0;
}

// --- simulate-count ---------------------------------------------------------

struct CountArgs {
  Common common;
  std::string jumps;
  std::string clock;
  std::optional<double> horizon;
  std::string jumps_input;
  std::string jumps_output;
};

int simulate_count(const CountArgs& args) {
  const imf::JumpLaw law = args.jumps.empty()
                               ? imf::unit_jump_law()
                               : imf::io::jump_law_from_json(imf::io::read_json_file(args.jumps));
  if (args.horizon && !(*args.horizon > 0.0)) {
    fail(ErrorCode::InvalidArgument, "horizon must be positive", "--horizon");
  }
  const int n = args.common.replicates;

  if (args.clock.empty()) {
    if (!args.horizon) {
      fail(ErrorCode::InvalidArgument, "--horizon is required without --clock", "--horizon");
    }
    if (!args.jumps_input.empty() || !args.jumps_output.empty()) {
      fail(ErrorCode::InvalidArgument, "--jumps-input/--jumps-output need --clock", "--clock");
    }
    const auto files = run_replicates<std::string>(n, [&](int r) {
      imf::Rng rng = imf::make_stream(args.common.seed, static_cast<std::uint64_t>(r));
      std::ostringstream os;
      imf::io::write_jump_path_csv(os, imf::simulate_compound_poisson(law, *args.horizon, rng));
      return os.str();
    });
    for (int r = 0; r < n; ++r) {
      imf::io::write_text_file(replicate_path(args.common.output, r, n), files[r]);
    }
    std::cout << "wrote " << n << " jump path(s) on [0, " << *args.horizon << "]\n";
    return 0;
  }

  const auto clock = read_path(args.clock);
  std::optional<imf::JumpPath> given;
  if (!args.jumps_input.empty()) {
    if (!args.horizon) {
      fail(ErrorCode::InvalidArgument, "--horizon is required with --jumps-input", "--horizon");
    }
    if (n != 1) {
      fail(ErrorCode::InvalidArgument, "--jumps-input takes a single replicate", "--replicates");
    }
    std::istringstream in(imf::io::read_text_file(args.jumps_input));
    given = imf::io::read_jump_path_csv(in, *args.horizon, args.jumps_input);
  }
  const double horizon = args.horizon.value_or(imf::count_horizon(clock));

  struct Output {
    std::string path;
    std::string jumps;
  };
  const auto outputs = run_replicates<Output>(n, [&](int r) {
    imf::Rng rng = imf::make_stream(args.common.seed, static_cast<std::uint64_t>(r));
    const imf::JumpPath count = given ? *given : imf::simulate_compound_poisson(law, horizon, rng);
    Output out;
    out.path = path_csv(imf::time_change(count, clock));
    if (!args.jumps_output.empty()) {
      std::ostringstream os;
      imf::io::write_jump_path_csv(os, count);
      out.jumps = os.str();
    }
    return out;
  });
  for (int r = 0; r < n; ++r) {
    imf::io::write_text_file(replicate_path(args.common.output, r, n), outputs[r].path);
    if (!args.jumps_output.empty()) {
      imf::io::write_text_file(replicate_path(args.jumps_output, r, n), outputs[r].jumps);
    }
  }
  std::cout << "wrote " << n << " time-changed count path(s), horizon " << horizon << "\n";
  return 0;
}

// --- thin -------------------------------------------------------------------

struct ThinArgs {
  Common common;
  std::string semigroup;
  std::string multiplier;
  std::string input;
  std::string jumps;
};

int thin(const ThinArgs& args) {
  const imf::SemigroupSpec spec =
      args.semigroup.empty() ? imf::binomial_semigroup()
                             : imf::io::semigroup_from_json(imf::io::read_json_file(args.semigroup));
  const auto multiplier = imf::io::multiplier_from_json(imf::io::read_json_file(args.multiplier));
  if (!args.jumps.empty()) {
    imf::check_pairing(spec, imf::io::jump_law_from_json(imf::io::read_json_file(args.jumps)));
  }
  const auto path = imf::to_count(read_path(args.input));
  const int n = args.common.replicates;
  const auto files = run_replicates<std::string>(n, [&](int r) {
    imf::Rng rng = imf::make_stream(args.common.seed, static_cast<std::uint64_t>(r));
    return path_csv(imf::thin_path(spec, multiplier, path, rng).as_path());
  });
  for (int r = 0; r < n; ++r) {
    imf::io::write_text_file(replicate_path(args.common.output, r, n), files[r]);
  }
  std::cout << "wrote " << n << " thinned path(s) with " << spec.label << " semigroup\n";
  return 0;
}

// --- moments ----------------------------------------------------------------

struct MomentsArgs {
  Common common;
  std::string config;
};

std::vector<double> number_or_array(const json& j, const std::string& field) {
  std::vector<double> out;
  if (j.is_number()) {
    out.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (!e.is_number()) fail(ErrorCode::InvalidArgument, "expected numbers", field);
      out.push_back(e.get<double>());
    }
  } else {
    fail(ErrorCode::InvalidArgument, "expected a number or an array of numbers", field);
  }
  if (out.empty()) fail(ErrorCode::InvalidArgument, "no values given", field);
  return out;
}

std::vector<imf::CEstimate> c_from_json(const json& j) {
  if (!j.is_array()) fail(ErrorCode::InvalidArgument, "expected an array", "moments.c_estimates");
  std::vector<imf::CEstimate> out;
  for (const auto& e : j) {
    imf::CEstimate c;
    if (e.is_number()) {
      c.value = e.get<double>();
    } else if (e.is_object()) {
      for (const auto& [key, v] : e.items()) {
        if (key != "value" && key != "stderr") {
          fail(ErrorCode::InvalidArgument, "unknown field", "moments.c_estimates." + key);
        }
        if (!v.is_number()) {
          fail(ErrorCode::InvalidArgument, "expected a number", "moments.c_estimates." + key);
        }
      }
      if (!e.contains("value")) {
        fail(ErrorCode::InvalidArgument, "missing required field", "moments.c_estimates.value");
      }
      c.value = e["value"].get<double>();
      c.std_error = e.value("stderr", 0.0);
    } else {
      fail(ErrorCode::InvalidArgument, "expected numbers or {value, stderr}", "moments.c_estimates");
    }
    out.push_back(c);
  }
  return out;
}

// c(k) = T^{-tau(k)} E Y(T)^k from `paths` cascade paths of length T.
// c(1) = 1 exactly because E Y(T) = T for the truncated cascade.
std::vector<imf::CEstimate> estimate_c(imf::CascadeParams params, int order, int paths,
                                       std::uint64_t seed) {
  params.length = params.integral_scale;
  const imf::CascadeSimulator sim(params);
  const auto ends = run_replicates<double>(paths, [&](int r) {
    imf::Rng rng = imf::make_stream(seed, static_cast<std::uint64_t>(r));
    const auto y = sim.path(rng);
    return y.values[y.values.size() - 1];
  });
  const double T = params.integral_scale;
  std::vector<imf::CEstimate> out{{1.0, 0.0, true}};
  for (int k = 2; k <= order; ++k) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double y : ends) {
      const double v = std::pow(y, k);
      sum += v;
      sum_sq += v * v;
    }
    const double n = paths;
    const double mean = sum / n;
    const double var = paths > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    const double scale = std::pow(T, -imf::scaling_function(params, k));
    out.push_back({mean * scale, std::sqrt(var / n) * scale, false});
  }
  return out;
}

int moments(const MomentsArgs& args) {
  require_single(args.common, "moments");
  const json cfg = imf::io::read_json_file(args.config);
  if (!cfg.is_object()) fail(ErrorCode::InvalidArgument, "expected a JSON object", "moments");
  for (const auto& [key, v] : cfg.items()) {
    static const std::vector<std::string> known{"order", "t", "jumps", "cascade",
                                                "c_estimates", "c_paths", "semigroup"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      fail(ErrorCode::InvalidArgument, "unknown field", "moments." + key);
    }
  }
  if (!cfg.contains("order") || !cfg["order"].is_number_integer()) {
    fail(ErrorCode::InvalidArgument, "expected an integer", "moments.order");
  }
  const int order = cfg["order"].get<int>();
  if (!cfg.contains("t")) fail(ErrorCode::InvalidArgument, "missing required field", "moments.t");
  const auto times = number_or_array(cfg["t"], "moments.t");
  const imf::JumpLaw law =
      cfg.contains("jumps") ? imf::io::jump_law_from_json(cfg["jumps"]) : imf::unit_jump_law();
  if (cfg.contains("semigroup")) {
    imf::check_pairing(imf::io::semigroup_from_json(cfg["semigroup"]), law);
  }

  json out;
  out["order"] = order;
  out["jumps"] = imf::io::to_json(law);
  std::function<double(double)> tau = [](double q) { return q; };
  std::vector<imf::CEstimate> c;
  if (cfg.contains("cascade")) {
    const auto params = imf::io::cascade_from_json(cfg["cascade"]);
    out["clock"] = imf::io::to_json(params);
    tau = [params](double q) { return imf::scaling_function(params, q); };
    if (cfg.contains("c_estimates")) {
      c = c_from_json(cfg["c_estimates"]);
    } else {
      int paths = 1000;
      if (cfg.contains("c_paths")) {
        if (!cfg["c_paths"].is_number_integer() || cfg["c_paths"].get<int>() < 2) {
          fail(ErrorCode::InvalidArgument, "expected an integer >= 2", "moments.c_paths");
        }
        paths = cfg["c_paths"].get<int>();
      }
      c = estimate_c(params, std::max(order, 1), paths, args.common.seed);
      out["c_paths"] = paths;
    }
  } else {
    out["clock"] = "deterministic";
    c = cfg.contains("c_estimates") ? c_from_json(cfg["c_estimates"])
                                    : std::vector<imf::CEstimate>(std::max(order, 0), {1.0, 0.0, true});
  }

  json predictions = json::array();
  for (double t : times) {
    const auto p = imf::theoretical_moments(order, t, law, tau, c);
    json entry = imf::io::to_json(p);
    if (!out.contains("coefficients")) {
      out["coefficients"] = entry["coefficients"];
      out["c_estimates"] = entry["c_estimates"];
    }
    entry.erase("coefficients");
    entry.erase("c_estimates");
    entry["t"] = t;
    predictions.push_back(entry);
  }
  out["predictions"] = predictions;
  imf::io::write_text_file(args.common.output, out.dump(2) + "\n");
  std::cout << "wrote moment predictions of order " << order << " at " << times.size()
            << " time(s)\n";
  return 0;
}

// --- estimate ---------------------------------------------------------------

struct EstimateArgs {
  Common common;
  std::string input;
  std::string config;
  std::string plot_output;
  std::string table_output;
};

imf::EstimationConfig estimation_config(const json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, "expected a JSON object", "estimate");
  for (const auto& [key, v] : j.items()) {
    if (key != "mode" && key != "orders" && key != "block_sizes" && key != "max_factorial_order") {
      fail(ErrorCode::InvalidArgument, "unknown field", "estimate." + key);
    }
  }
  imf::EstimationConfig config;
  const std::string mode = j.value("mode", std::string("absolute"));
  if (mode == "absolute") {
    config.mode = imf::MomentMode::Absolute;
  } else if (mode == "factorial") {
    config.mode = imf::MomentMode::Factorial;
  } else {
    fail(ErrorCode::InvalidArgument, "expected 'absolute' or 'factorial'", "estimate.mode");
  }
  if (!j.contains("orders")) {
    fail(ErrorCode::InvalidArgument, "missing required field", "estimate.orders");
  }
  const auto orders = number_or_array(j["orders"], "estimate.orders");
  config.orders = Eigen::Map<const Eigen::VectorXd>(orders.data(), static_cast<Eigen::Index>(orders.size()));
  if (j.contains("block_sizes")) {
    const auto sizes = number_or_array(j["block_sizes"], "estimate.block_sizes");
    config.block_sizes =
        Eigen::Map<const Eigen::VectorXd>(sizes.data(), static_cast<Eigen::Index>(sizes.size()));
  }
  if (j.contains("max_factorial_order")) {
    if (!j["max_factorial_order"].is_number_integer()) {
      fail(ErrorCode::InvalidArgument, "expected an integer", "estimate.max_factorial_order");
    }
    config.partition.max_factorial_order = j["max_factorial_order"].get<int>();
  }
  return config;
}

int estimate(const EstimateArgs& args) {
  require_single(args.common, "estimate");
  const auto config = estimation_config(imf::io::read_json_file(args.config));
  const auto path = read_path(args.input);
  const auto report = imf::estimate_scaling_function(path, config);

  std::ostringstream slopes;
  imf::io::write_estimates_csv(slopes, report.estimates);
  imf::io::write_text_file(args.common.output, slopes.str());
  if (!args.plot_output.empty()) {
    std::ostringstream os;
    imf::io::write_plot_csv(os, report.points);
    imf::io::write_text_file(args.plot_output, os.str());
  }
  if (!args.table_output.empty()) {
    std::ostringstream os;
    imf::io::write_partition_csv(os, report.table);
    imf::io::write_text_file(args.table_output, os.str());
  }
  for (const auto& e : report.estimates) {
    std::cout << "order " << e.order << ": slope " << e.slope << " (stderr " << e.std_error
              << ", " << e.points_used << " points)\n";
  }
  return 0;
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
  Common common;
  std::vector<int> criteria;
  std::string work_dir;
};

int verify(const VerifyArgs& args, const char* argv0) {
  require_single(args.common, "verify");
  std::vector<int> ids = args.criteria;
  if (ids.empty()) {
    for (int i = 1; i <= imf::verify::kCriterionCount; ++i) ids.push_back(i);
  }
  for (int id : ids) {
    if (id < 1 || id > imf::verify::kCriterionCount) {
      fail(ErrorCode::InvalidArgument, "criterion ids lie in [1, 11]", "--criteria");
    }
  }
  imf::verify::AcceptanceOptions options;
  options.seed = args.common.seed;
  std::error_code ec;
  options.cli = fs::canonical("/proc/self/exe", ec);
  if (ec) options.cli = fs::absolute(argv0);
  if (!args.work_dir.empty()) options.work_dir = args.work_dir;

  json report = json::array();
  bool all = true;
  for (int id : ids) {
    const auto r = imf::verify::run_criterion(id, options);
    std::cout << imf::verify::format_result(r) << std::endl;
    all = all && r.passed;
    report.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
  }
  imf::io::write_text_file(args.common.output, report.dump(2) + "\n");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integer-valued multifractal processes: simulation, thinning, moments, estimation"};
  app.require_subcommand(1);

  CascadeArgs cascade;
  auto* c1 = app.add_subcommand("simulate-cascade", "Simulate multifractal cascade clocks Y");
  add_common(c1, cascade.common);
  c1->add_option("--config", cascade.config, "Cascade parameters (JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  CountArgs count;
  auto* c2 = app.add_subcommand(
      "simulate-count", "Simulate a compound Poisson process N, optionally time-changed by a clock");
  add_common(c2, count.common);
  c2->add_option("--jumps", count.jumps, "Jump-size law (JSON); unit jumps by default")
      ->check(CLI::ExistingFile);
  c2->add_option("--clock", count.clock, "Clock path CSV (t,value); output is X = N(Y)")
      ->check(CLI::ExistingFile);
  c2->add_option("--horizon", count.horizon,
                 "Horizon of N; defaults to 1.1 times the clock maximum");
  c2->add_option("--jumps-input", count.jumps_input, "Use this N (jump_time,jump_size CSV)")
      ->check(CLI::ExistingFile);
  c2->add_option("--jumps-output", count.jumps_output, "Also write N as jump_time,jump_size CSV");

  ThinArgs thin_args;
  auto* c3 = app.add_subcommand("thin", "Multiply a count path by a random multiplier");
  add_common(c3, thin_args.common);
  c3->add_option("--semigroup", thin_args.semigroup, "Semigroup spec (JSON); binomial by default")
      ->check(CLI::ExistingFile);
  c3->add_option("--multiplier", thin_args.multiplier, "Multiplier law (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  c3->add_option("--input", thin_args.input, "Count path CSV (t,value)")
      ->required()
      ->check(CLI::ExistingFile);
  c3->add_option("--jumps", thin_args.jumps, "Jump law to cross-check against the semigroup")
      ->check(CLI::ExistingFile);

  MomentsArgs moments_args;
  auto* c4 = app.add_subcommand("moments", "Theoretical raw and factorial moments of X");
  add_common(c4, moments_args.common);
  c4->add_option("--config", moments_args.config, "Moment query (JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  EstimateArgs estimate_args;
  auto* c5 = app.add_subcommand("estimate", "Estimate the scaling function of a path");
  add_common(c5, estimate_args.common);
  c5->add_option("--input", estimate_args.input, "Path CSV (t,value)")
      ->required()
      ->check(CLI::ExistingFile);
  c5->add_option("--config", estimate_args.config, "Estimation config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  c5->add_option("--plot-output", estimate_args.plot_output, "Write (ln t, ln S) points");
  c5->add_option("--table-output", estimate_args.table_output, "Write the partition table");

  VerifyArgs verify_args;
  auto* c6 = app.add_subcommand("verify", "Run the built-in acceptance suite");
  add_common(c6, verify_args.common);
  c6->add_option("--criteria", verify_args.criteria, "Criterion ids to run (default: all)")
      ->delimiter(',');
  c6->add_option("--work-dir", verify_args.work_dir, "Scratch directory for CLI checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c1) return simulate_cascade(cascade);
    if (*c2) return simulate_count(count);
    if (*c3) return thin(thin_args);
    if (*c4) return moments(moments_args);
    if (*c5) return estimate(estimate_args);
    return verify(verify_args, argv[0]);
  } catch (const imf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return imf::is_numerical(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
