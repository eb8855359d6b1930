#include "imf/verify/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "imf/cascade.hpp"
#include "imf/combinatorics.hpp"
#include "imf/count.hpp"
#include "imf/error.hpp"
#include "imf/estimation.hpp"
#include "imf/io.hpp"
#include "imf/semigroup.hpp"
#include "imf/thinning.hpp"
#include "imf/verify/oracles.hpp"

namespace imf::verify {

namespace {

namespace fs = std::filesystem;

std::string num(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

// Collects sub-checks of one criterion.
struct Checks {
  bool ok = true;
  std::vector<std::string> notes;

  void add(bool pass, std::string note) {
    ok = ok && pass;
    notes.push_back((pass ? "" : "FAILED ") + std::move(note));
  }
  std::string joined() const {
    std::string out;
    for (std::size_t i = 0; i < notes.size(); ++i) {
      if (i) out += "; ";
      out += notes[i];
    }
    return out;
  }
};

SemigroupSpec branching_example() { return validate_spec(2.0, {{0, 0.75}, {2, 0.25}}); }

CascadeParams lognormal(double length) {
  CascadeParams p;
  p.kind = CascadeKind::LogNormal;
  p.sigma2 = 0.05;
  p.integral_scale = 50.0;
  p.grid_step = 0.01;
  p.length = length;
  return p;
}

std::vector<std::int64_t> poisson_sample(double mean, std::size_t n, Rng& rng) {
  std::poisson_distribution<std::int64_t> dist(mean);
  std::vector<std::int64_t> out(n);
  for (auto& x : out) x = dist(rng);
  return out;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return MeanSe{mean, std::sqrt(ss / (n - 1.0) / n)};
}

// 1. alpha (.) X for the binomial semigroup against Poisson(1.5).
Checks binomial_thinning_law(std::uint64_t seed) {
  Checks c;
  Rng rng = make_stream(seed, 1);
  const auto spec = binomial_semigroup();
  auto x = poisson_sample(5.0, 100000, rng);
  for (auto& v : x) v = thin_value(spec, 0.3, v, rng);
  const auto t = chi_square_gof(x, [](std::int64_t k) { return poisson_pmf(k, 1.5); });
  c.add(t.p_value > 0.01, "chi2=" + num(t.statistic) + " dof=" + std::to_string(t.dof) +
                              " p=" + num(t.p_value, 3));
  return c;
}

// 2. a (.) (b (.) X) against (ab) (.) X, independent families per application.
Checks composition_law(std::uint64_t seed) {
  Checks c;
  const std::size_t n = 100000;
  std::uint64_t stream = 100;
  for (const auto& spec : {binomial_semigroup(), branching_example()}) {
    Rng left_rng = make_stream(seed, stream++);
    Rng right_rng = make_stream(seed, stream++);
    auto left = poisson_sample(5.0, n, left_rng);
    for (auto& v : left) {
      v = thin_value(spec, 0.6, v, left_rng);
      v = thin_value(spec, 0.5, v, left_rng);
    }
    auto right = poisson_sample(5.0, n, right_rng);
    for (auto& v : right) v = thin_value(spec, 0.3, v, right_rng);
    const auto t = chi_square_two_sample(left, right);
    c.add(t.p_value > 0.01, spec.label + ": chi2=" + num(t.statistic) +
                                " dof=" + std::to_string(t.dof) + " p=" + num(t.p_value, 3));
  }
  return c;
}

// 3. ODE evaluation, semigroup law, Abel property and G for the binomial spec.
Checks semigroup_identities(std::uint64_t) {
  Checks c;
  const auto binomial = binomial_semigroup();
  const auto branching = branching_example();
  const std::vector<double> zs{0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};

  double closed_err = 0.0;
  for (double s : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    for (double z : zs) {
      const double exact = 1.0 - std::exp(-s) + std::exp(-s) * z;
      closed_err = std::max(closed_err, std::abs(integrate_semigroup(binomial, s, z) - exact));
    }
  }
  c.add(closed_err < 1e-8, "binomial ODE vs closed form " + num(closed_err, 3));

  double oracle_err = 0.0;
  for (double s : {0.5, 1.0, 3.0}) {
    for (double z : zs) {
      oracle_err = std::max(oracle_err, std::abs(eval_semigroup(branching, s, z) -
                                                 semigroup_by_adaptive_ode(branching, s, z)));
    }
  }
  c.add(oracle_err < 1e-8, "branching RK4 vs adaptive ODE " + num(oracle_err, 3));

  double law = 0.0;
  const std::vector<double> times{0.3, 0.7, 1.1};
  for (double s : times) {
    for (double t : times) {
      for (double z : zs) {
        const double lhs = eval_semigroup(branching, s, eval_semigroup(branching, t, z));
        law = std::max(law, std::abs(lhs - eval_semigroup(branching, s + t, z)));
      }
    }
  }
  c.add(law < 1e-6, "semigroup law residual " + num(law, 3));

  double abel = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    for (double z : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double g = extract_limit_pgf(branching, z);
      const double g_ft = extract_limit_pgf(branching, eval_semigroup(branching, t, z));
      abel = std::max(abel, std::abs((1.0 - g_ft) - std::exp(-t) * (1.0 - g)));
    }
  }
  c.add(abel < 1e-6, "Abel residual " + num(abel, 3));

  double identity = 0.0;
  for (double z : zs) identity = std::max(identity, std::abs(extract_limit_pgf(binomial, z) - z));
  c.add(identity < 1e-4, "binomial |G(z)-z| " + num(identity, 3));
  return c;
}

// 4. N(A t) against A (.) N(t) for the binomial semigroup and unit jumps.
Checks time_scaling_vs_thinning(std::uint64_t seed) {
  Checks c;
  const auto spec = binomial_semigroup();
  const auto jumps = unit_jump_law();
  const double pairing = pairing_residual(spec, jumps);
  c.add(pairing < 1e-4, "pairing residual " + num(pairing, 3));

  const auto a = MultiplierSampler::two_point({0.25, 0.75}, {0.5, 0.5});
  const double t = 10.0;
  const std::size_t n = 100000;
  Rng left_rng = make_stream(seed, 400);
  Rng right_rng = make_stream(seed, 401);
  std::vector<std::int64_t> left(n);
  std::vector<std::int64_t> right(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double at = a.draw(left_rng) * t;
    left[i] = simulate_compound_poisson(jumps, at, left_rng).value_at(at);
    const auto nt = simulate_compound_poisson(jumps, t, right_rng).value_at(t);
    right[i] = thin_value(spec, a, nt, right_rng);
  }
  for (double z : {0.2, 0.5, 0.8}) {
    const auto l = empirical_pgf(left, z);
    const auto r = empirical_pgf(right, z);
    const double se = std::hypot(l.std_error, r.std_error);
    const double diff = std::abs(l.mean - r.mean);
    c.add(diff < 3.0 * se, "z=" + num(z, 2) + ": |diff|/se=" + num(diff / se, 3));
  }
  return c;
}

// 5. Closed-form cone measure against quadrature.
Checks cone_measure_oracle(std::uint64_t) {
  Checks c;
  struct Triple {
    double l, T, lag;
  };
  std::vector<Triple> triples;
  const double e = std::exp(1.0);
  for (auto [l, T] : {std::pair{1.0, e}, std::pair{0.01, 50.0}, std::pair{0.1, 10.0},
                      std::pair{0.5, 2.0}}) {
    for (double frac : {0.0, 0.5, 1.0, 3.0}) triples.push_back({l, T, frac * l});
    triples.push_back({l, T, 0.5 * (l + T)});
  }
  double worst = 0.0;
  double lag0 = 0.0;
  for (const auto& x : triples) {
    const double closed = cone_measure(x.T, x.l, x.lag);
    const double numeric = cone_measure_by_quadrature(x.T, x.l, x.lag);
    worst = std::max(worst, std::abs(closed - numeric));
    if (x.lag == 0.0) {
      lag0 = std::max(lag0, std::abs(closed - (std::log(x.T / x.l) + 1.0)));
    }
  }
  c.add(triples.size() == 20, std::to_string(triples.size()) + " triples");
  c.add(worst < 1e-6, "max |closed - quadrature| " + num(worst, 3));
  c.add(lag0 < 1e-12, "lag 0 vs ln(T/l)+1 " + num(lag0, 3));
  const double ex = cone_measure_by_quadrature(e, 1.0, 0.0);
  c.add(std::abs(ex - 2.0) < 1e-6, "T=e, l=1, lag=0: " + num(ex, 10));
  return c;
}

// 6. Mean of Y(t)/t over 200 log-normal paths.
Checks cascade_normalization(std::uint64_t seed) {
  Checks c;
  const CascadeSimulator sim(lognormal(50.0));
  const std::vector<double> ts{1.0, 5.0, 20.0};
  std::vector<std::vector<double>> ratios(ts.size());
  for (int r = 0; r < 200; ++r) {
    Rng rng = make_stream(seed, 600 + r);
    const auto y = sim.path(rng);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const auto idx = static_cast<Eigen::Index>(std::llround(ts[i] / 0.01));
      ratios[i].push_back(y.values[idx] / ts[i]);
    }
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto m = mean_and_se(ratios[i]);
    c.add(m.mean >= 0.9 && m.mean <= 1.1,
          "t=" + num(ts[i], 3) + ": " + num(m.mean, 4) + " (se " + num(m.se, 2) + ")");
  }
  return c;
}

// 7. Moment expansion, deterministic and log-normal clocks.
Checks moment_expansion(std::uint64_t seed) {
  Checks c;
  const auto unit = unit_jump_law();
  const std::vector<CEstimate> exact(3, CEstimate{1.0, 0.0, true});
  const auto det = theoretical_moments(3, 2.0, unit, [](double q) { return q; }, exact);
  const double brute = poisson_raw_moment_by_summation(3, 2.0);
  c.add(std::abs(det.raw - brute) < 1e-9 && std::abs(det.raw - 22.0) < 1e-9,
        "E N(2)^3 = " + num(det.raw, 12) + " vs summation " + num(brute, 12));

  const auto params = lognormal(50.0);
  const double T = params.integral_scale;
  const double t = T / 2.0;
  const auto tau = [&params](double q) { return scaling_function(params, q); };

  const CascadeSimulator full(params);
  std::vector<double> y2;
  for (int r = 0; r < 1000; ++r) {
    Rng rng = make_stream(seed, 7000 + r);
    const auto y = full.path(rng);
    const double yt = y.values[y.values.size() - 1];
    y2.push_back(yt * yt);
  }
  const auto m2 = mean_and_se(y2);
  const double scale = std::pow(T, -tau(2.0));
  const std::vector<CEstimate> plug{{1.0, 0.0, true}, {m2.mean * scale, m2.se * scale, false}};
  const auto pred = theoretical_moments(2, t, unit, tau, plug);

  auto half = params;
  half.length = t;
  const CascadeSimulator short_sim(half);
  std::vector<double> x2;
  for (int r = 0; r < 4000; ++r) {
    Rng rng = make_stream(seed, 20000 + r);
    const auto y = short_sim.path(rng);
    const auto x = simulate_time_changed(unit, y, rng);
    const auto xt = static_cast<double>(x.values[x.values.size() - 1]);
    x2.push_back(xt * xt);
  }
  const auto mc = mean_and_se(x2);
  const double se = std::hypot(pred.raw_stderr, mc.se);
  const double z = std::abs(pred.raw - mc.mean) / se;
  c.add(z < 3.0, "E X(25)^2 predicted " + num(pred.raw) + " (se " + num(pred.raw_stderr, 3) +
                     ", c(2)=" + num(plug[1].value, 4) + ") vs Monte Carlo " + num(mc.mean) +
                     " (se " + num(mc.se, 3) + "), |z|=" + num(z, 3));
  return c;
}

// 8. Factorial-moment scaling of X = N(Y).
Checks factorial_scaling(std::uint64_t seed) {
  Checks c;
  const CascadeSimulator sim(lognormal(2000.0));
  const double target = scaling_function(sim.params(), 2.0);
  EstimationConfig config;
  config.orders = Eigen::Vector2d(2.0, 3.0);
  config.mode = MomentMode::Factorial;
  std::vector<double> slopes;
  for (int r = 0; r < 20; ++r) {
    Rng rng = make_stream(seed, 800 + r);
    const auto y = sim.path(rng);
    const auto x = simulate_time_changed(unit_jump_law(), y, rng);
    const auto report = estimate_scaling_function(to_real(x), config);
    slopes.push_back(report.estimates[0].slope);
  }
  const auto m = mean_and_se(slopes);
  const auto [lo, hi] = std::minmax_element(slopes.begin(), slopes.end());
  c.add(std::abs(m.mean - target) <= 0.1,
        "mean slope " + num(m.mean, 4) + " vs tau(2)=" + num(target, 4) + " (replicate range " +
            num(*lo, 4) + ".." + num(*hi, 4) + ")");
  return c;
}

// 9. Estimator calibration on Poisson and deterministic paths.
Checks estimator_calibration(std::uint64_t seed) {
  Checks c;
  const double step = 0.125;
  const double length = 10000.0;
  const auto cells = static_cast<Eigen::Index>(length / step);
  SamplePath clock{uniform_grid(cells, step), uniform_grid(cells, step), "identity"};

  EstimationConfig config;
  config.orders = Eigen::Vector3d(1.0, 2.0, 3.0);
  config.mode = MomentMode::Factorial;
  double worst = 0.0;
  for (int r = 0; r < 5; ++r) {
    Rng rng = make_stream(seed, 900 + r);
    const auto x = simulate_time_changed(unit_jump_law(), clock, rng);
    const auto report = estimate_scaling_function(to_real(x), config);
    for (const auto& e : report.estimates) worst = std::max(worst, std::abs(e.slope - e.order));
  }
  c.add(worst <= 0.05, "Poisson paths (5): max |slope - n| " + num(worst, 3));

  const double det_step = 1.0 / 16.0;
  const auto det_cells = static_cast<Eigen::Index>(length / det_step);
  SamplePath line{uniform_grid(det_cells, det_step), uniform_grid(det_cells, det_step), "line"};
  EstimationConfig abs_config;
  abs_config.orders = Eigen::VectorXd::LinSpaced(9, 0.0, 4.0);
  const auto report = estimate_scaling_function(line, abs_config);
  double det = 0.0;
  for (const auto& e : report.estimates) det = std::max(det, std::abs(e.slope - e.order));
  c.add(det <= 1e-12, "deterministic path: max |slope - q| " + num(det, 3));
  return c;
}

// 10. Combinatorics against set-partition enumeration.
Checks combinatorics_oracles(std::uint64_t seed) {
  Checks c;
  Rng rng = make_stream(seed, 1000);
  std::uniform_int_distribution<int> small(-5, 9);

  bool stirling_ok = true;
  bool bell_ok = true;
  for (int n = 1; n <= 8; ++n) {
    std::vector<Rational> x;
    for (int i = 0; i < n; ++i) {
      const int numerator = small(rng);
      const int denominator = 1 + (small(rng) + 5) % 4;
      x.emplace_back(numerator, denominator);
    }
    for (int k = 1; k <= n; ++k) {
      stirling_ok = stirling_ok && stirling2(n, k) == stirling2_by_enumeration(n, k);
      const std::span<const Rational> args(x.data(), static_cast<std::size_t>(n - k + 1));
      bell_ok = bell_ok && bell_incomplete<Rational>(n, k, args) == bell_by_enumeration(n, k, x);
    }
  }
  c.add(stirling_ok, "stirling2 n<=8");
  c.add(bell_ok, "bell_incomplete n<=8 (random rational arguments)");

  std::uniform_int_distribution<std::int64_t> values(0, 40);
  std::vector<std::int64_t> sample(2000);
  for (auto& v : sample) v = values(rng);
  bool identity_ok = true;
  for (int n = 1; n <= 8; ++n) {
    BigInt raw = 0;
    for (auto v : sample) raw += boost::multiprecision::pow(BigInt(v), static_cast<unsigned>(n));
    BigInt converted = 0;
    for (int r = 1; r <= n; ++r) {
      FallingFactorialSum sum(r);
      for (auto v : sample) sum.add(v);
      converted += stirling2(n, r) * sum.total();
    }
    identity_ok = identity_ok && raw == converted;
  }
  c.add(identity_ok, "raw = sum_r {n r} factorial, exact, n<=8 on 2000 samples");
  return c;
}

// 11. CLI reruns.

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

Checks cli_reproducibility(const AcceptanceOptions& options) {
  Checks c;
  if (options.cli.empty() || !fs::exists(options.cli)) {
    c.add(false, "CLI executable not found: '" + options.cli.string() + "'");
    return c;
  }
  fs::path root = options.work_dir;
  if (root.empty()) {
    root = fs::temp_directory_path() / ("imf-repro-" + std::to_string(options.seed));
  }
  fs::remove_all(root);
  const fs::path inputs = root / "inputs";
  fs::create_directories(inputs);
  write_file(inputs / "cascade.json",
             R"({"kind": "lognormal", "sigma2": 0.05, "integral_scale": 50, "grid_step": 0.01, "length": 50})");
  write_file(inputs / "cp.json",
             R"({"kind": "log-compound-poisson", "cp_intensity": 0.5, "cp_marks": {"kind": "normal", "mean": 0.1, "sd": 0.2}, "integral_scale": 10, "grid_step": 0.01, "length": 20})");
  write_file(inputs / "jumps.json", R"({"pmf": {"1": 0.5, "2": 0.5}})");
  write_file(inputs / "semigroup.json", R"({"rate": 2, "offspring": {"0": 0.75, "2": 0.25}})");
  write_file(inputs / "multiplier.json",
             R"({"kind": "two-point", "values": [0.25, 0.75], "probabilities": [0.5, 0.5]})");
  write_file(inputs / "moments.json",
             R"({"order": 3, "t": [1, 10, 25], "jumps": {"pmf": {"1": 1}}, "cascade": {"kind": "lognormal", "sigma2": 0.05, "integral_scale": 50, "grid_step": 0.01}, "c_paths": 50})");
  write_file(inputs / "estimate.json", R"({"mode": "factorial", "orders": [1, 2, 3, 4]})");

  const std::string cli = quote(options.cli);
  std::set<std::string> seen;
  for (const char* run : {"a", "b"}) {
    const fs::path d = root / run;
    fs::create_directories(d);
    const std::vector<std::string> commands{
        "simulate-cascade --config " + quote(inputs / "cascade.json") + " --seed 42 --output " +
            quote(d / "clock.csv"),
        "simulate-cascade --config " + quote(inputs / "cp.json") + " --seed 42 --replicates 3 --output " +
            quote(d / "cp.csv"),
        "simulate-count --clock " + quote(d / "clock.csv") + " --jumps " + quote(inputs / "jumps.json") +
            " --seed 7 --output " + quote(d / "count.csv") + " --jumps-output " + quote(d / "n.csv"),
        "simulate-count --horizon 100 --seed 7 --replicates 2 --output " + quote(d / "poisson.csv"),
        "simulate-count --clock " + quote(d / "clock.csv") + " --jumps-input " + quote(d / "n.csv") +
            " --horizon 1000 --seed 7 --output " + quote(d / "count_again.csv"),
        "thin --semigroup " + quote(inputs / "semigroup.json") + " --multiplier " +
            quote(inputs / "multiplier.json") + " --input " + quote(d / "count.csv") +
            " --seed 9 --replicates 2 --output " + quote(d / "thinned.csv"),
        "moments --config " + quote(inputs / "moments.json") + " --seed 5 --output " +
            quote(d / "moments.json"),
        "estimate --input " + quote(d / "count.csv") + " --config " + quote(inputs / "estimate.json") +
            " --seed 1 --output " + quote(d / "slopes.csv") + " --plot-output " +
            quote(d / "plot.csv") + " --table-output " + quote(d / "table.csv"),
        "verify --criteria 10 --seed 3 --output " + quote(d / "verify.json"),
    };
    for (const auto& cmd : commands) {
      const std::string line = cli + " " + cmd + " >> " + quote(root / "log.txt") + " 2>&1";
      const int status = std::system(line.c_str());
      if (status != 0) {
        c.add(false, "'" + cmd.substr(0, cmd.find(' ')) + "' exited with status " +
                         std::to_string(status) + " (see " + (root / "log.txt").string() + ")");
        return c;
      }
    }
    for (const auto& entry : fs::directory_iterator(d)) seen.insert(entry.path().filename().string());
  }

  bool same = true;
  std::string mismatch;
  for (const auto& name : seen) {
    const fs::path a = root / "a" / name;
    const fs::path b = root / "b" / name;
    if (!fs::exists(a) || !fs::exists(b) || slurp(a) != slurp(b)) {
      same = false;
      mismatch += " " + name;
    }
  }
  c.add(same, std::to_string(seen.size()) + " output files compared" +
                  (same ? std::string(", all identical") : ", differing:" + mismatch));
  const bool round_trip = slurp(root / "a" / "count.csv") == slurp(root / "a" / "count_again.csv");
  c.add(round_trip, "count path rebuilt from the written jump CSV");
  return c;
}

struct Definition {
  const char* title;
  double budget;
};

const Definition kDefinitions[kCriterionCount] = {
    {"binomial thinning law", 10.0},
    {"thinning composition", 30.0},
    {"semigroup identities", 5.0},
    {"random time scaling vs thinning", 60.0},
    {"cone measure", 5.0},
    {"cascade normalization", 120.0},
    {"moment expansion", 120.0},
    {"factorial-moment scaling", 300.0},
    {"estimator calibration", 60.0},
    {"combinatorics oracles", 5.0},
    {"CLI reproducibility", 60.0},
};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  if (id < 1 || id > kCriterionCount) {
    fail(ErrorCode::OutOfRange, "criterion id must lie in [1, 11]", "criteria");
  }
  CriterionResult result;
  result.id = id;
  result.title = kDefinitions[id - 1].title;
  result.budget_seconds = kDefinitions[id - 1].budget;

  const auto start = std::chrono::steady_clock::now();
  Checks checks;
  try {
    const std::uint64_t seed = options.seed;
    switch (id) {
      case 1: checks = binomial_thinning_law(seed); break;
      case 2: checks = composition_law(seed); break;
      case 3: checks = semigroup_identities(seed); break;
      case 4: checks = time_scaling_vs_thinning(seed); break;
      case 5: checks = cone_measure_oracle(seed); break;
      case 6: checks = cascade_normalization(seed); break;
      case 7: checks = moment_expansion(seed); break;
      case 8: checks = factorial_scaling(seed); break;
      case 9: checks = estimator_calibration(seed); break;
      case 10: checks = combinatorics_oracles(seed); break;
      default: checks = cli_reproducibility(options); break;
    }
  } catch (const std::exception& e) {
    checks.add(false, std::string("error: ") + e.what());
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = result.seconds <= result.budget_seconds;
  if (!in_time) checks.add(false, "over time budget");
  result.passed = checks.ok && in_time;
  result.detail = checks.joined();
  return result;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids,
                                            const AcceptanceOptions& options) {
  std::vector<CriterionResult> out;
  for (int id : ids) out.push_back(run_criterion(id, options));
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << "  [" << (r.id < 10 ? " " : "") << r.id << "] " << r.title
     << " (" << num(r.seconds, 3) << " s / " << num(r.budget_seconds, 3) << " s): " << r.detail;
  return os.str();
}

}  // namespace imf::verify
