#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fp/report.hpp"

namespace {

struct CommonArgs {
  std::string frame_path;
  int samples = 100;
  std::uint64_t seed = 0;
  double tolerance = -1.0;
  std::string format = "text";
  std::string points;
  std::string only;
  std::string kinds;
  bool natural_chart = false;
};

void attach_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--frame", args.frame_path, "frame document path")->required();
  cmd->add_option("--samples", args.samples, "number of sample points")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", args.seed, "sampling seed (reports are byte-stable per seed)");
  cmd->add_option("--tol", args.tolerance, "tolerance override for all executed checks");
  cmd->add_option("--format", args.format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--points", args.points,
                  "explicit points 'x1,..,xn;y1,..,yn ...' or @file");
  cmd->add_option("--only", args.only, "comma-separated identity-name filter");
  cmd->add_option("--kinds", args.kinds,
                  "comma-separated connection filter (cartan,canonical,dual,berwald)");
  cmd->add_flag("--natural-chart", args.natural_chart,
                "declare the frame's chart natural for the positional-form checks");
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char c : text) {
    if (c == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

int run(const std::string& command, const CommonArgs& args) {
  fp::RunConfig config;
  config.command = command;
  config.frame_path = args.frame_path;
  config.samples = args.samples;
  config.seed = args.seed;
  if (args.tolerance > 0.0) config.tolerance = args.tolerance;
  config.format = args.format;
  config.natural_chart = args.natural_chart;
  config.only = split_csv(args.only);
  for (const std::string& kind : split_csv(args.kinds)) {
    const auto parsed = fp::connection_kind_from_string(kind);
    if (!parsed) throw fp::Error("unknown connection kind: " + kind);
    config.kinds.push_back(*parsed);
  }

  if (!args.points.empty()) {
    const fp::FrameDocument doc = fp::load_frame_document(config.frame_path);
    config.explicit_points = fp::parse_points(args.points, doc.n);
  }

  const fp::RunResult result = fp::run_command(config);
  if (config.format == "json") {
    std::cout << result.json.dump(2) << "\n";
  } else {
    std::cout << fp::render_text(result.json);
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fptensor: frame-field tensor calculus on the slit tangent bundle"};
  app.require_subcommand(1);

  CommonArgs args;
  const char* commands[] = {"validate", "report", "classify", "check-identities",
                            "chart-check"};
  const char* descriptions[] = {
      "structure conditions of the frame at sampled points",
      "connection triples, torsions and curvatures at requested points",
      "special-class membership and table suites",
      "the structural identity registry",
      "transformation law of the nonlinear connection under the chart map"};
  for (std::size_t i = 0; i < 5; ++i) {
    attach_common(app.add_subcommand(commands[i], descriptions[i]), args);
  }

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, args);
  } catch (const fp::Error& err) {
    std::cerr << "fptensor: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "fptensor: " << err.what() << "\n";
    return 2;
  }
}
