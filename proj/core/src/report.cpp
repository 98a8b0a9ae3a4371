#include "fp/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fp/covariant.hpp"
#include "fp/sampling.hpp"
#include "fp/torsion_curvature.hpp"

namespace fp {

namespace {

Json tensor_json(const Tensor& t, const std::vector<std::string>& labels) {
  Json j;
  Json indices = Json::array();
  for (std::size_t k = 0; k < t.variances().size(); ++k) {
    Json idx;
    idx["label"] = k < labels.size() ? labels[k] : "i" + std::to_string(k);
    idx["variance"] = to_string(t.variances()[k]);
    indices.push_back(idx);
  }
  j["indices"] = indices;
  j["dim"] = t.n();
  j["components"] = t.components();  // row-major
  return j;
}

Json point_json(const EvalPoint& p) {
  Json j;
  j["x"] = p.x();
  j["y"] = p.y();
  return j;
}

Json identity_json(const IdentityResidual& r) {
  Json j;
  j["name"] = r.name;
  j["residual"] = r.residual;
  j["signed_residual"] = r.signed_residual;
  j["tolerance"] = r.tolerance;
  j["samples"] = r.samples;
  j["pass"] = r.pass;
  if (r.skipped_reason) j["skipped_reason"] = *r.skipped_reason;
  return j;
}

Json condition_json(const ConditionResult& c) {
  Json j;
  j["name"] = c.name;
  j["residual"] = c.residual;
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  return j;
}

Json header(const RunConfig& config, const Frame& frame) {
  Json j;
  j["schema_version"] = 1;
  j["command"] = config.command;
  Json f;
  f["path"] = config.frame_path;
  f["name"] = frame.document().name;
  f["n"] = frame.n();
  f["natural_chart"] =
      config.natural_chart || frame.document().natural_chart;
  j["frame"] = f;
  j["seed"] = config.seed;
  j["generator"] = "xoshiro256** (splitmix64-seeded)";
  j["samples"] = config.samples;
  if (config.tolerance) j["tolerance"] = *config.tolerance;
  return j;
}

std::vector<EvalPoint> sampled_points(const RunConfig& config, int n, bool grouped) {
  if (!config.explicit_points.empty()) return config.explicit_points;
  Rng rng(config.seed);
  SampleOptions opts;
  if (grouped) {
    const int groups = std::max(1, config.samples / 3);
    return sample_grouped_points(n, groups, 3, rng, opts);
  }
  opts.count = config.samples;
  return sample_points(n, rng, opts);
}

// ---------------------------------------------------------------------------
// Command bodies
// ---------------------------------------------------------------------------

RunResult run_validate(const RunConfig& config, const Frame& frame) {
  const std::vector<EvalPoint> pts = sampled_points(config, frame.n(), false);
  ValidationTolerances tol;
  const ValidationReport report = validate_structure(frame, pts);

  RunResult out;
  out.json = header(config, frame);
  Json conditions = Json::array();
  bool all_pass = true;
  for (const auto& c : report.conditions) {
    Json j;
    j["condition"] = c.condition;
    j["max_residual"] = c.max_residual;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    conditions.push_back(j);
    all_pass = all_pass && c.pass;
  }
  out.json["conditions"] = conditions;
  Json levels;
  levels["gap"] = report.gap_valid;
  levels["lagrange"] = report.lagrange_valid;
  levels["finsler"] = report.finsler_valid;
  out.json["levels"] = levels;
  out.json["warnings"] = report.warnings;
  out.json["pass"] = all_pass;
  out.exit_code = all_pass ? 0 : 1;
  return out;
}

RunResult run_check_identities(const RunConfig& config, const Frame& frame) {
  const std::vector<EvalPoint> pts = sampled_points(config, frame.n(), true);
  FrameSampler sampler(frame, pts);
  IdentityOptions opts;
  opts.tolerance = config.tolerance;
  opts.natural_chart = config.natural_chart;

  const std::vector<IdentityResidual> results = run_identities(sampler, config.only, opts);

  RunResult out;
  out.json = header(config, frame);
  Json identities = Json::array();
  bool all_pass = true;
  for (const auto& r : results) {
    identities.push_back(identity_json(r));
    all_pass = all_pass && r.pass;
  }
  out.json["identities"] = identities;
  out.json["pass"] = all_pass;
  out.exit_code = all_pass ? 0 : 1;
  return out;
}

RunResult run_classify(const RunConfig& config, const Frame& frame) {
  const std::vector<EvalPoint> pts = sampled_points(config, frame.n(), true);
  FrameSampler sampler(frame, pts);
  ClassifyOptions opts;
  if (config.tolerance) opts.tolerance = *config.tolerance;
  opts.natural_chart = config.natural_chart;

  const Classification cls = classify(sampler, opts);

  RunResult out;
  out.json = header(config, frame);
  Json classes = Json::array();
  for (const auto& rec : cls.classes) {
    Json j;
    j["class"] = rec.class_name;
    Json conditions = Json::array();
    for (const auto& c : rec.conditions) conditions.push_back(condition_json(c));
    j["conditions"] = conditions;
    j["verdict"] = rec.verdict;
    j["notes"] = rec.notes;
    classes.push_back(j);
  }
  out.json["classes"] = classes;
  Json extras = Json::array();
  for (const auto& c : cls.extras) extras.push_back(condition_json(c));
  out.json["extras"] = extras;
  out.json["inclusion_consistent"] = cls.inclusion_consistent;
  out.json["notes"] = cls.notes;

  // Per-cell table suites for every class that holds.
  Json tables = Json::object();
  for (const auto& rec : cls.classes) {
    if (rec.verdict != "holds" || rec.class_name == "FP-Landsberg") continue;
    const std::vector<IdentityResidual> cells =
        verify_special_tables(sampler, rec.class_name, opts);
    Json arr = Json::array();
    for (const auto& cell : cells) arr.push_back(identity_json(cell));
    tables[rec.class_name] = arr;
  }
  out.json["special_tables"] = tables;

  out.json["pass"] = cls.inclusion_consistent;
  out.exit_code = cls.inclusion_consistent ? 0 : 1;
  return out;
}

RunResult run_chart_check(const RunConfig& config, const Frame& frame) {
  if (!frame.document().has_chart_map()) {
    throw Error("chart-check: the frame document declares no chart_map");
  }
  const ChartMap chart = ChartMap::from_document(frame.document());
  std::vector<EvalPoint> pts = sampled_points(config, frame.n(), false);

  const IdentityResidual result =
      chart_transform_check(frame, chart, pts, config.tolerance.value_or(1e-7));

  RunResult out;
  out.json = header(config, frame);
  out.json["chart_map"] = frame.document().chart_map_text;
  out.json["result"] = identity_json(result);
  out.json["pass"] = result.pass;
  out.exit_code = result.pass ? 0 : 1;
  return out;
}

Json connection_block(FrameSampler& sampler, std::size_t i, ConnectionKind kind) {
  const GeometryContext& ctx = sampler.context(i);
  const ConnectionTriple triple = ctx.triple_values(kind);
  Json j;
  j["kind"] = to_string(kind);
  j["F"] = tensor_json(triple.F, {"alpha", "mu", "nu"});
  j["N"] = tensor_json(triple.N, {"alpha", "mu"});
  j["C"] = tensor_json(triple.C, {"alpha", "mu", "nu"});

  const TorsionSet& tors = sampler.torsions(i, kind);
  Json torsion;
  torsion["hh_T"] = tensor_json(values_of(tors.hh), {"alpha", "mu", "nu"});
  torsion["hhv_C"] = tensor_json(values_of(tors.hhv), {"alpha", "mu", "nu"});
  torsion["vh_R"] = tensor_json(values_of(tors.vh), {"alpha", "mu", "nu"});
  torsion["vhv_P"] = tensor_json(values_of(tors.vhv), {"alpha", "mu", "nu"});
  torsion["vv_S"] = tensor_json(values_of(tors.vv), {"alpha", "mu", "nu"});
  j["torsions"] = torsion;

  const CurvatureSet& curv = sampler.curvatures(i, kind);
  Json curvature;
  curvature["h_R"] = tensor_json(values_of(curv.h), {"alpha", "mu", "nu", "sigma"});
  curvature["hv_P"] = tensor_json(values_of(curv.hv), {"alpha", "mu", "nu", "sigma"});
  curvature["v_S"] = tensor_json(values_of(curv.v), {"alpha", "mu", "nu", "sigma"});
  j["curvatures"] = curvature;
  return j;
}

RunResult run_report(const RunConfig& config, const Frame& frame) {
  std::vector<EvalPoint> pts = config.explicit_points;
  if (pts.empty()) {
    Rng rng(config.seed);
    SampleOptions opts;
    opts.count = std::min(config.samples, 3);
    pts = sample_points(frame.n(), rng, opts);
  }
  FrameSampler sampler(frame, pts);

  std::vector<ConnectionKind> kinds(config.kinds);
  if (kinds.empty()) {
    kinds.assign(kAllConnectionKinds.begin(), kAllConnectionKinds.end());
  }

  RunResult out;
  out.json = header(config, frame);
  Json points = Json::array();
  for (std::size_t i = 0; i < sampler.size(); ++i) {
    const GeometryContext& ctx = sampler.context(i);
    Json j;
    j["point"] = point_json(sampler.points()[i]);
    Json scalars;
    scalars["lambda_determinant"] = ctx.lambda_determinant();
    scalars["lagrangian"] = ctx.lagrangian().value();
    const double lag = ctx.lagrangian().value();
    scalars["finsler_function"] = lag >= 0.0 ? std::sqrt(lag) : 0.0;
    j["scalars"] = scalars;
    j["frame"] = tensor_json(values_of(ctx.lambda()), {"i", "alpha"});
    j["coframe"] = tensor_json(values_of(ctx.coframe()), {"i", "alpha"});
    j["metric"] = tensor_json(values_of(ctx.metric()), {"mu", "nu"});
    j["metric_inverse"] = tensor_json(values_of(ctx.metric_inverse()), {"mu", "nu"});
    j["cartan_tensor"] = tensor_json(values_of(ctx.cartan_tensor()), {"beta", "mu", "nu"});
    j["formal_christoffel"] =
        tensor_json(values_of(ctx.formal_christoffel()), {"alpha", "mu", "nu"});
    j["spray"] = tensor_json(values_of(ctx.spray()), {"alpha"});
    j["barthel"] = tensor_json(values_of(ctx.barthel()), {"alpha", "mu"});
    j["berwald_coefficients"] =
        tensor_json(values_of(ctx.berwald_coefficients()), {"alpha", "mu", "nu"});
    const ContortionPair contortion = ctx.contortion_values();
    Json cont;
    cont["A"] = tensor_json(contortion.A, {"alpha", "mu", "nu"});
    cont["B"] = tensor_json(contortion.B, {"alpha", "mu", "nu"});
    j["contortion"] = cont;
    Json conns = Json::array();
    for (ConnectionKind kind : kinds) {
      conns.push_back(connection_block(sampler, i, kind));
    }
    j["connections"] = conns;
    points.push_back(j);
  }
  out.json["points"] = points;
  out.json["pass"] = true;
  out.exit_code = 0;
  return out;
}

}  // namespace

RunResult run_command(const RunConfig& config) {
  const FrameDocument doc = load_frame_document(config.frame_path);
  const Frame frame(doc);

  if (config.command == "validate") return run_validate(config, frame);
  if (config.command == "report") return run_report(config, frame);
  if (config.command == "classify") return run_classify(config, frame);
  if (config.command == "check-identities") return run_check_identities(config, frame);
  if (config.command == "chart-check") return run_chart_check(config, frame);
  throw Error("unknown command: " + config.command);
}

// ---------------------------------------------------------------------------
// Explicit point lists
// ---------------------------------------------------------------------------

std::vector<EvalPoint> parse_points(const std::string& spec, int n) {
  std::string body = spec;
  if (!spec.empty() && spec.front() == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw Error("cannot open points file: " + spec.substr(1));
    std::ostringstream buffer;
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      buffer << line << ' ';
    }
    body = buffer.str();
  }

  std::vector<EvalPoint> pts;
  std::istringstream tokens(body);
  std::string token;
  while (tokens >> token) {
    const auto semi = token.find(';');
    if (semi == std::string::npos) {
      throw Error("point entry needs the form x1,..,xn;y1,..,yn: " + token);
    }
    auto parse_list = [&](const std::string& part) {
      std::vector<double> vals;
      std::istringstream ss(part);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        vals.push_back(std::stod(item));
      }
      return vals;
    };
    std::vector<double> x = parse_list(token.substr(0, semi));
    std::vector<double> y = parse_list(token.substr(semi + 1));
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n) {
      throw Error("point entry has wrong dimension: " + token);
    }
    pts.emplace_back(std::move(x), std::move(y));
  }
  if (pts.empty()) throw Error("no points parsed from the point list");
  return pts;
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

namespace {

std::string num(const Json& j) { return j.dump(); }

void render_identity_line(std::ostream& os, const Json& r) {
  const bool skipped = r.contains("skipped_reason");
  os << (skipped ? "SKIP" : (r["pass"].get<bool>() ? "PASS" : "FAIL")) << "  "
     << r["name"].get<std::string>() << "  residual=" << num(r["residual"])
     << " tol=" << num(r["tolerance"]);
  if (skipped) os << "  (" << r["skipped_reason"].get<std::string>() << ")";
  os << "\n";
}

void render_tensor(std::ostream& os, const std::string& name, const Json& t,
                   const std::string& indent) {
  os << indent << name << " [";
  bool first = true;
  for (const auto& idx : t["indices"]) {
    if (!first) os << " ";
    first = false;
    os << idx["label"].get<std::string>() << ":" << idx["variance"].get<std::string>();
  }
  os << "] dim=" << num(t["dim"]) << "\n" << indent << "  ";
  first = true;
  for (const auto& c : t["components"]) {
    if (!first) os << " ";
    first = false;
    os << num(c);
  }
  os << "\n";
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream os;
  const std::string command = report["command"].get<std::string>();
  os << "fptensor " << command << "  frame=" << report["frame"]["name"].get<std::string>()
     << " (n=" << num(report["frame"]["n"]) << ")"
     << "  seed=" << num(report["seed"]) << " samples=" << num(report["samples"]) << "\n";

  if (command == "validate") {
    for (const auto& c : report["conditions"]) {
      os << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "  "
         << c["condition"].get<std::string>() << "  max_residual=" << num(c["max_residual"])
         << " tol=" << num(c["tolerance"]) << "\n";
    }
    os << "levels: gap=" << num(report["levels"]["gap"])
       << " lagrange=" << num(report["levels"]["lagrange"])
       << " finsler=" << num(report["levels"]["finsler"]) << "\n";
    for (const auto& w : report["warnings"]) {
      os << "warning: " << w.get<std::string>() << "\n";
    }
  } else if (command == "check-identities") {
    for (const auto& r : report["identities"]) render_identity_line(os, r);
  } else if (command == "classify") {
    for (const auto& rec : report["classes"]) {
      os << rec["class"].get<std::string>() << ": " << rec["verdict"].get<std::string>() << "\n";
      for (const auto& c : rec["conditions"]) {
        os << "  " << (c["pass"].get<bool>() ? "pass" : "fail") << "  "
           << c["name"].get<std::string>() << "  residual=" << num(c["residual"])
           << " tol=" << num(c["tolerance"]) << "\n";
      }
      for (const auto& note : rec["notes"]) {
        os << "  note: " << note.get<std::string>() << "\n";
      }
    }
    for (const auto& c : report["extras"]) {
      os << "extra: " << c["name"].get<std::string>() << " residual=" << num(c["residual"])
         << " pass=" << num(c["pass"]) << "\n";
    }
    os << "inclusion_consistent: " << num(report["inclusion_consistent"]) << "\n";
    for (const auto& [class_name, cells] : report["special_tables"].items()) {
      os << "table for " << class_name << ":\n";
      for (const auto& cell : cells) {
        os << "  ";
        render_identity_line(os, cell);
      }
    }
  } else if (command == "chart-check") {
    os << "chart_map:";
    for (const auto& e : report["chart_map"]) os << " " << e.get<std::string>();
    os << "\n";
    render_identity_line(os, report["result"]);
  } else if (command == "report") {
    for (const auto& pt : report["points"]) {
      os << "point x=" << pt["point"]["x"].dump() << " y=" << pt["point"]["y"].dump() << "\n";
      os << "  lambda_determinant=" << num(pt["scalars"]["lambda_determinant"])
         << " lagrangian=" << num(pt["scalars"]["lagrangian"])
         << " finsler_function=" << num(pt["scalars"]["finsler_function"]) << "\n";
      for (const char* name : {"frame", "coframe", "metric", "metric_inverse", "cartan_tensor",
                               "formal_christoffel", "spray", "barthel",
                               "berwald_coefficients"}) {
        render_tensor(os, name, pt[name], "  ");
      }
      render_tensor(os, "contortion.A", pt["contortion"]["A"], "  ");
      render_tensor(os, "contortion.B", pt["contortion"]["B"], "  ");
      for (const auto& conn : pt["connections"]) {
        os << "  connection " << conn["kind"].get<std::string>() << "\n";
        render_tensor(os, "F", conn["F"], "    ");
        render_tensor(os, "N", conn["N"], "    ");
        render_tensor(os, "C", conn["C"], "    ");
        for (const auto& [tname, tval] : conn["torsions"].items()) {
          render_tensor(os, "torsion." + tname, tval, "    ");
        }
        for (const auto& [cname, cval] : conn["curvatures"].items()) {
          render_tensor(os, "curvature." + cname, cval, "    ");
        }
      }
    }
  }

  os << "overall: " << (report["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace fp
