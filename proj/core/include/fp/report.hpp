#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fp/chart.hpp"
#include "fp/classify.hpp"
#include "fp/frame.hpp"
#include "fp/identities.hpp"

namespace fp {

using Json = nlohmann::ordered_json;

/// One command invocation: which report to produce and how to sample.
struct RunConfig {
  std::string command;  // validate | report | classify | check-identities | chart-check
  std::string frame_path;
  int samples = 100;
  std::uint64_t seed = 0;
  std::optional<double> tolerance;
  std::string format = "text";  // text | json
  std::vector<EvalPoint> explicit_points;
  std::vector<std::string> only;            // identity-name filter
  std::vector<ConnectionKind> kinds;        // connection filter for `report`
  bool natural_chart = false;
};

struct RunResult {
  int exit_code = 0;  // 0 all checks pass, 1 a check failed (2 = errors, thrown)
  Json json;
};

/// Executes the command against a loaded frame document. Throws fp::Error
/// (exit 2 territory) on input problems; check failures are encoded in the
/// exit code and report.
RunResult run_command(const RunConfig& config);

/// Renders the machine report as the human-readable text form. Every number
/// in the text is the exact serialization of the corresponding JSON value.
std::string render_text(const Json& report);

/// Parses an explicit point list: whitespace-separated entries of the form
/// "x1,..,xn;y1,..,yn", or "@path" naming a file with one entry per line
/// ('#' comments allowed).
std::vector<EvalPoint> parse_points(const std::string& spec, int n);

}  // namespace fp
