#include "imf/io.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

#include "imf/error.hpp"

namespace imf::io {

namespace {

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed,
                    const std::string& context) {
  if (!j.is_object()) {
    fail(ErrorCode::InvalidArgument, "expected a JSON object", context);
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) {
      fail(ErrorCode::InvalidArgument, "unknown field", context + "." + key);
    }
  }
}

const json& require(const json& j, const char* key, const std::string& context) {
  const auto it = j.find(key);
  if (it == j.end()) {
    fail(ErrorCode::InvalidArgument, "missing required field", context + "." + key);
  }
  return *it;
}

double get_number(const json& j, const char* key, const std::string& context) {
  const json& v = require(j, key, context);
  if (!v.is_number()) {
    fail(ErrorCode::InvalidArgument, "expected a number", context + "." + key);
  }
  return v.get<double>();
}

double get_number_or(const json& j, const char* key, double fallback, const std::string& context) {
  return j.contains(key) ? get_number(j, key, context) : fallback;
}

std::string get_string(const json& j, const char* key, const std::string& context) {
  const json& v = require(j, key, context);
  if (!v.is_string()) {
    fail(ErrorCode::InvalidArgument, "expected a string", context + "." + key);
  }
  return v.get<std::string>();
}

std::vector<double> get_number_array(const json& j, const char* key, const std::string& context) {
  const json& v = require(j, key, context);
  if (!v.is_array()) {
    fail(ErrorCode::InvalidArgument, "expected an array of numbers", context + "." + key);
  }
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) {
      fail(ErrorCode::InvalidArgument, "expected an array of numbers", context + "." + key);
    }
    out.push_back(e.get<double>());
  }
  return out;
}

template <typename Int>
std::map<Int, double> get_pmf(const json& j, const char* key, const std::string& context) {
  const json& v = require(j, key, context);
  if (!v.is_object()) {
    fail(ErrorCode::InvalidArgument, "expected an object mapping integers to probabilities",
         context + "." + key);
  }
  std::map<Int, double> out;
  for (const auto& [k, p] : v.items()) {
    Int parsed{};
    const auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), parsed);
    if (ec != std::errc() || ptr != k.data() + k.size()) {
      fail(ErrorCode::InvalidArgument, "key '" + k + "' is not an integer", context + "." + key);
    }
    if (!p.is_number()) {
      fail(ErrorCode::InvalidArgument, "probability for '" + k + "' is not a number",
           context + "." + key);
    }
    out[parsed] = p.template get<double>();
  }
  return out;
}

double parse_double(std::string_view s, const std::string& where) {
  double v = 0.0;
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorCode::InvalidArgument, "cannot parse number '" + std::string(s) + "'", where);
  }
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Reads a two-column CSV with the given header, calling `row` for each line.
template <typename Fn>
void read_two_column(std::istream& in, std::string_view header, const std::string& source, Fn row) {
  std::string line;
  if (!std::getline(in, line)) {
    fail(ErrorCode::InvalidArgument, "empty file", source);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    fail(ErrorCode::InvalidArgument,
         "expected header '" + std::string(header) + "', found '" + line + "'", source);
  }
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(number);
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      fail(ErrorCode::InvalidArgument, "expected 2 fields", where);
    }
    row(parse_double(fields[0], where), parse_double(fields[1], where), where);
  }
}

std::string kind_name(CascadeKind kind) {
  return kind == CascadeKind::LogNormal ? "lognormal" : "log-compound-poisson";
}

json marks_to_json(const MarkLaw& marks) {
  if (const auto* pm = std::get_if<MarkLaw::PointMasses>(&marks.law)) {
    return {{"kind", "point"}, {"values", pm->values}, {"probabilities", pm->probabilities}};
  }
  if (const auto* nm = std::get_if<MarkLaw::Normal>(&marks.law)) {
    return {{"kind", "normal"}, {"mean", nm->mean}, {"sd", nm->sd}};
  }
  return {{"kind", "exponential"}, {"rate", std::get<MarkLaw::Exponential>(marks.law).rate}};
}

MarkLaw marks_from_json(const json& j, const std::string& context) {
  const std::string kind = get_string(j, "kind", context);
  MarkLaw marks;
  if (kind == "point") {
    reject_unknown(j, {"kind", "values", "probabilities"}, context);
    marks.law = MarkLaw::PointMasses{get_number_array(j, "values", context),
                                     get_number_array(j, "probabilities", context)};
  } else if (kind == "normal") {
    reject_unknown(j, {"kind", "mean", "sd"}, context);
    marks.law = MarkLaw::Normal{get_number(j, "mean", context), get_number(j, "sd", context)};
  } else if (kind == "exponential") {
    reject_unknown(j, {"kind", "rate"}, context);
    marks.law = MarkLaw::Exponential{get_number(j, "rate", context)};
  } else {
    fail(ErrorCode::InvalidArgument, "unknown mark law '" + kind + "'", context + ".kind");
  }
  marks.validate();
  return marks;
}

std::string rational_string(const Rational& r) {
  return r.str();
}

json rational_list(const std::vector<Rational>& values) {
  json out = json::array();
  for (const auto& r : values) {
    out.push_back({{"exact", rational_string(r)}, {"value", r.convert_to<double>()}});
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

SemigroupSpec semigroup_from_json(const json& j) {
  const std::string ctx = "semigroup";
  reject_unknown(j, {"rate", "offspring", "label"}, ctx);
  const double rate = get_number(j, "rate", ctx);
  auto offspring = get_pmf<int>(j, "offspring", ctx);
  const std::string label = j.contains("label") ? get_string(j, "label", ctx) : std::string{};
  return validate_spec(rate, std::move(offspring), label);
}

json to_json(const SemigroupSpec& spec) {
  json offspring = json::object();
  for (const auto& [k, p] : spec.offspring) offspring[std::to_string(k)] = p;
  return {{"rate", spec.rate}, {"offspring", offspring}, {"label", spec.label}};
}

MultiplierSampler multiplier_from_json(const json& j) {
  const std::string ctx = "multiplier";
  const std::string kind = get_string(j, "kind", ctx);
  if (kind == "constant") {
    reject_unknown(j, {"kind", "alpha"}, ctx);
    return MultiplierSampler::constant(get_number(j, "alpha", ctx));
  }
  if (kind == "two-point") {
    reject_unknown(j, {"kind", "values", "probabilities"}, ctx);
    return MultiplierSampler::two_point(get_number_array(j, "values", ctx),
                                        get_number_array(j, "probabilities", ctx));
  }
  if (kind == "empirical") {
    reject_unknown(j, {"kind", "values"}, ctx);
    return MultiplierSampler::empirical(get_number_array(j, "values", ctx));
  }
  fail(ErrorCode::InvalidArgument, "unknown multiplier kind '" + kind + "'", ctx + ".kind");
}

json to_json(const MultiplierSampler& sampler) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, MultiplierSampler::Constant>) {
          return {{"kind", "constant"}, {"alpha", k.alpha}};
        } else if constexpr (std::is_same_v<K, MultiplierSampler::TwoPoint>) {
          return {{"kind", "two-point"}, {"values", k.values}, {"probabilities", k.probabilities}};
        } else {
          return {{"kind", "empirical"}, {"values", k.values}};
        }
      },
      sampler.kind());
}

CascadeParams cascade_from_json(const json& j) {
  const std::string ctx = "cascade";
  reject_unknown(j,
                 {"kind", "sigma2", "cp_intensity", "cp_marks", "integral_scale", "truncation",
                  "grid_step", "length"},
                 ctx);
  CascadeParams p;
  const std::string kind = get_string(j, "kind", ctx);
  if (kind == "lognormal") {
    p.kind = CascadeKind::LogNormal;
    p.sigma2 = get_number(j, "sigma2", ctx);
  } else if (kind == "log-compound-poisson") {
    p.kind = CascadeKind::LogCompoundPoisson;
    p.cp_intensity = get_number(j, "cp_intensity", ctx);
    p.cp_marks = marks_from_json(require(j, "cp_marks", ctx), ctx + ".cp_marks");
  } else {
    fail(ErrorCode::InvalidArgument, "unknown cascade kind '" + kind + "'", ctx + ".kind");
  }
  p.integral_scale = get_number(j, "integral_scale", ctx);
  p.grid_step = get_number(j, "grid_step", ctx);
  p.length = get_number_or(j, "length", p.integral_scale, ctx);
  if (j.contains("truncation")) p.truncation = get_number(j, "truncation", ctx);
  validate(p);
  return p;
}

json to_json(const CascadeParams& params) {
  json j = {{"kind", kind_name(params.kind)},
            {"integral_scale", params.integral_scale},
            {"grid_step", params.grid_step},
            {"length", params.length},
            {"truncation", params.cutoff()}};
  if (params.kind == CascadeKind::LogNormal) {
    j["sigma2"] = params.sigma2;
  } else {
    j["cp_intensity"] = params.cp_intensity;
    j["cp_marks"] = marks_to_json(params.cp_marks);
  }
  return j;
}

JumpLaw jump_law_from_json(const json& j) {
  const std::string ctx = "jumps";
  reject_unknown(j, {"pmf", "label"}, ctx);
  auto pmf = get_pmf<std::int64_t>(j, "pmf", ctx);
  const std::string label = j.contains("label") ? get_string(j, "label", ctx) : std::string{};
  return validate_jump_law(std::move(pmf), label);
}

json to_json(const JumpLaw& law) {
  json pmf = json::object();
  for (const auto& [k, p] : law.pmf) pmf[std::to_string(k)] = p;
  return {{"pmf", pmf}, {"label", law.label}};
}

json to_json(const MomentCoefficients& mc) {
  json j = {{"order", mc.order},
            {"raw_coeffs", rational_list(mc.raw_coeffs)},
            {"factorial_coeffs", rational_list(mc.factorial_coeffs)},
            {"jump_derivatives", rational_list(mc.jump_derivatives)}};
  j["scaled_coeffs"] = mc.scaled_coeffs ? json(*mc.scaled_coeffs) : json(nullptr);
  return j;
}

json to_json(const MomentPrediction& prediction) {
  json c = json::array();
  for (const auto& e : prediction.c_used) {
    c.push_back({{"value", e.value},
                 {"stderr", e.std_error},
                 {"provenance", e.exact ? "exact" : "estimated"}});
  }
  return {{"raw", prediction.raw},
          {"raw_stderr", prediction.raw_stderr},
          {"factorial", prediction.factorial},
          {"factorial_stderr", prediction.factorial_stderr},
          {"coefficients", to_json(prediction.coefficients)},
          {"c_estimates", c},
          {"warnings", prediction.warnings}};
}

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::InvalidArgument, std::string("malformed JSON: ") + e.what(), source);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::InvalidArgument, "cannot open file '" + path + "'", path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    fail(ErrorCode::InvalidArgument, "cannot write file '" + path + "'", path);
  }
  out << content;
}

json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

void write_path_csv(std::ostream& out, const SamplePath& path) {
  out << "t,value\n";
  for (Eigen::Index i = 0; i < path.size(); ++i) {
    out << format_double(path.times[i]) << ',' << format_double(path.values[i]) << '\n';
  }
}

void write_path_csv(std::ostream& out, const CountPath& path) {
  out << "t,value\n";
  for (Eigen::Index i = 0; i < path.size(); ++i) {
    out << format_double(path.times[i]) << ',' << path.values[i] << '\n';
  }
}

SamplePath read_path_csv(std::istream& in, const std::string& source) {
  std::vector<double> t;
  std::vector<double> v;
  read_two_column(in, "t,value", source, [&](double a, double b, const std::string&) {
    t.push_back(a);
    v.push_back(b);
  });
  SamplePath path;
  path.times = Eigen::Map<Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()));
  path.values = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  path.meta = source;
  check_path_shape(path);
  return path;
}

void write_jump_path_csv(std::ostream& out, const JumpPath& path) {
  out << "jump_time,jump_size\n";
  for (std::size_t i = 0; i < path.jump_times().size(); ++i) {
    out << format_double(path.jump_times()[i]) << ',' << path.jump_sizes()[i] << '\n';
  }
}

JumpPath read_jump_path_csv(std::istream& in, double horizon, const std::string& source) {
  std::vector<double> times;
  std::vector<std::int64_t> sizes;
  read_two_column(in, "jump_time,jump_size", source,
                  [&](double a, double b, const std::string& where) {
                    if (b != std::floor(b) || b < 1.0) {
                      fail(ErrorCode::InvalidArgument, "jump size must be a positive integer",
                           where);
                    }
                    times.push_back(a);
                    sizes.push_back(static_cast<std::int64_t>(b));
                  });
  return JumpPath(std::move(times), std::move(sizes), horizon);
}

void write_partition_csv(std::ostream& out, const PartitionTable& table) {
  out << "order,t,S\n";
  for (Eigen::Index i = 0; i < table.orders.size(); ++i) {
    for (Eigen::Index j = 0; j < table.block_sizes.size(); ++j) {
      out << format_double(table.orders[i]) << ',' << format_double(table.block_sizes[j]) << ','
          << format_double(table.stats(i, j)) << '\n';
    }
  }
}

void write_estimates_csv(std::ostream& out, const std::vector<ScalingEstimate>& estimates) {
  out << "order,slope,stderr,points_used,r_squared\n";
  for (const auto& e : estimates) {
    out << format_double(e.order) << ',' << format_double(e.slope) << ','
        << format_double(e.std_error) << ',' << e.points_used << ',' << format_double(e.r_squared)
        << '\n';
  }
}

void write_plot_csv(std::ostream& out, const std::vector<LogLogPoint>& points) {
  out << "order,log_t,log_S\n";
  for (const auto& p : points) {
    out << format_double(p.order) << ',' << format_double(p.log_t) << ','
        << format_double(p.log_s) << '\n';
  }
}

}  // namespace imf::io
