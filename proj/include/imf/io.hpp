#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

#include "imf/cascade.hpp"
#include "imf/combinatorics.hpp"
#include "imf/count.hpp"
#include "imf/estimation.hpp"
#include "imf/path.hpp"
#include "imf/semigroup.hpp"
#include "imf/thinning.hpp"

// JSON parsers are strict: unknown fields raise InvalidArgument naming the
// field. CSV files carry a header line, use '.' as decimal separator and end
// every line with '\n'. Doubles are written in shortest round-trip form.
namespace imf::io {

using nlohmann::json;

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

SemigroupSpec semigroup_from_json(const json& j);
json to_json(const SemigroupSpec& spec);

MultiplierSampler multiplier_from_json(const json& j);
json to_json(const MultiplierSampler& sampler);

CascadeParams cascade_from_json(const json& j);
json to_json(const CascadeParams& params);

JumpLaw jump_law_from_json(const json& j);
json to_json(const JumpLaw& law);

json to_json(const MomentCoefficients& mc);
json to_json(const MomentPrediction& prediction);

/// Parses JSON text, mapping syntax errors to InvalidArgument.
json parse_json(std::string_view text, const std::string& source);
json read_json_file(const std::string& path);

/// `t,value`
void write_path_csv(std::ostream& out, const SamplePath& path);
void write_path_csv(std::ostream& out, const CountPath& path);
SamplePath read_path_csv(std::istream& in, const std::string& source = "csv");

/// `jump_time,jump_size`
void write_jump_path_csv(std::ostream& out, const JumpPath& path);
JumpPath read_jump_path_csv(std::istream& in, double horizon, const std::string& source = "csv");

/// `order,t,S`; missing entries are written as `nan`.
void write_partition_csv(std::ostream& out, const PartitionTable& table);
/// `order,slope,stderr,points_used,r_squared`
void write_estimates_csv(std::ostream& out, const std::vector<ScalingEstimate>& estimates);
/// `order,log_t,log_S`
void write_plot_csv(std::ostream& out, const std::vector<LogLogPoint>& points);

/// Opens `path` for reading, throwing InvalidArgument if it cannot.
std::string read_text_file(const std::string& path);
/// Writes `content` to `path` in binary mode.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace imf::io
