#include "fp/frame.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fp/geometry.hpp"

namespace fp {

Frame::Frame(FrameDocument doc) : doc_(std::move(doc)) {
  if (doc_.n < 2) throw Error("Frame: dimension must be at least 2");
  if (static_cast<int>(doc_.frame.size()) != doc_.n) {
    throw Error("Frame: frame grid must have n rows");
  }
  for (const auto& row : doc_.frame) {
    if (static_cast<int>(row.size()) != doc_.n) {
      throw Error("Frame: frame grid must be n x n");
    }
    for (const auto& cell : row) {
      if (!cell) throw Error("Frame: missing frame entry");
    }
  }
}

JetGrid Frame::lambda_jets(const EvalPoint& point, int order) const {
  if (point.dim() != doc_.n) {
    throw Error("Frame: point dimension does not match the frame");
  }
  const std::vector<Jet> seeds = jet_lift(point, order);
  JetGrid grid(doc_.n, {Variance::Mesh, Variance::Upper});
  for (int i = 0; i < doc_.n; ++i) {
    for (int a = 0; a < doc_.n; ++a) {
      grid.at(i, a) = evaluate_with(
          doc_.frame[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)], seeds);
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Point-level accessors
// ---------------------------------------------------------------------------

Tensor frame_matrix(const Frame& frame, const EvalPoint& point, int order) {
  GeometryContext ctx(frame, point, order);
  return values_of(ctx.lambda());
}

Tensor coframe_matrix(const Frame& frame, const EvalPoint& point) {
  GeometryContext ctx(frame, point, 0);
  return values_of(ctx.coframe());
}

Tensor metric(const Frame& frame, const EvalPoint& point) {
  GeometryContext ctx(frame, point, 0);
  return values_of(ctx.metric());
}

Tensor inverse_metric(const Frame& frame, const EvalPoint& point) {
  GeometryContext ctx(frame, point, 0);
  return values_of(ctx.metric_inverse());
}

double lagrangian(const Frame& frame, const EvalPoint& point) {
  GeometryContext ctx(frame, point, 0);
  return ctx.lagrangian().value();
}

double finsler_function(const Frame& frame, const EvalPoint& point) {
  const double l = lagrangian(frame, point);
  if (l < 0.0) {
    throw DomainError("finsler_function: negative energy at the point");
  }
  return std::sqrt(l);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

const ValidationCondition* ValidationReport::find(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.condition == name) return &c;
  }
  return nullptr;
}

ValidationReport validate_structure(const Frame& frame,
                                    std::span<const EvalPoint> samples,
                                    const ValidationTolerances& tol) {
  if (samples.empty()) throw Error("validate_structure: at least one sample required");

  const int n = frame.n();
  double min_det = std::numeric_limits<double>::infinity();
  double max_homogeneity = 0.0;
  double max_symmetry = 0.0;
  double max_euler = 0.0;
  double min_minor = std::numeric_limits<double>::infinity();

  for (const EvalPoint& p : samples) {
    // Invertibility is probed directly so a singular frame is reported, not
    // thrown.
    const JetGrid lambda = frame.lambda_jets(p, 1);
    const double det = value_determinant(lambda);
    min_det = std::min(min_det, std::fabs(det));
    if (std::fabs(det) <= tol.determinant) continue;

    GeometryContext ctx(lambda, p);
    const JetGrid& g = ctx.metric();

    // Euler residual of degree-zero homogeneity: y^b dy_b lambda_i^a.
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < n; ++a) {
        double r = 0.0;
        for (int b = 0; b < n; ++b) {
          r += p.y()[static_cast<std::size_t>(b)] * ctx.dy(ctx.lambda().at(i, a), b).value();
        }
        max_homogeneity = std::max(max_homogeneity, std::fabs(r));
      }
    }

    // Total symmetry of dy_a g_mn and the Euler identity y^m dy_a g_mn = 0.
    for (int a = 0; a < n; ++a) {
      for (int mu = 0; mu < n; ++mu) {
        for (int nu = 0; nu < n; ++nu) {
          const double dag = ctx.dy(g.at(mu, nu), a).value();
          const double perm1 = ctx.dy(g.at(a, nu), mu).value();
          const double perm2 = ctx.dy(g.at(mu, a), nu).value();
          max_symmetry = std::max({max_symmetry, std::fabs(dag - perm1), std::fabs(dag - perm2)});
        }
      }
    }
    for (int a = 0; a < n; ++a) {
      for (int nu = 0; nu < n; ++nu) {
        double r = 0.0;
        for (int mu = 0; mu < n; ++mu) {
          r += p.y()[static_cast<std::size_t>(mu)] * ctx.dy(g.at(mu, nu), a).value();
        }
        max_euler = std::max(max_euler, std::fabs(r));
      }
    }

    // Leading principal minors of the value part of g.
    std::vector<double> m(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        m[static_cast<std::size_t>(r * n + c)] = g.at(r, c).value();
      }
    }
    for (int k = 1; k <= n; ++k) {
      // determinant of the k x k leading block by elimination
      std::vector<double> a(m.begin(), m.end());
      double det_k = 1.0;
      for (int col = 0; col < k; ++col) {
        int pivot = col;
        for (int r = col + 1; r < k; ++r) {
          if (std::fabs(a[static_cast<std::size_t>(r * n + col)]) >
              std::fabs(a[static_cast<std::size_t>(pivot * n + col)])) {
            pivot = r;
          }
        }
        if (a[static_cast<std::size_t>(pivot * n + col)] == 0.0) {
          det_k = 0.0;
          break;
        }
        if (pivot != col) {
          for (int c = 0; c < n; ++c) {
            std::swap(a[static_cast<std::size_t>(col * n + c)],
                      a[static_cast<std::size_t>(pivot * n + c)]);
          }
          det_k = -det_k;
        }
        det_k *= a[static_cast<std::size_t>(col * n + col)];
        for (int r = col + 1; r < k; ++r) {
          const double f =
              a[static_cast<std::size_t>(r * n + col)] / a[static_cast<std::size_t>(col * n + col)];
          for (int c = col; c < n; ++c) {
            a[static_cast<std::size_t>(r * n + c)] -= f * a[static_cast<std::size_t>(col * n + c)];
          }
        }
      }
      min_minor = std::min(min_minor, det_k);
    }
  }

  ValidationReport report;
  report.warnings = frame.document().warnings;

  auto push = [&](const std::string& name, double residual, double tolerance) {
    report.conditions.push_back(
        ValidationCondition{name, residual, tolerance, residual <= tolerance});
    return residual <= tolerance;
  };

  // Floor-style conditions report the violation depth (zero when safely
  // above the floor); the tolerance column holds the floor itself.
  const bool invertible = min_det > tol.determinant;
  report.conditions.push_back(ValidationCondition{
      "frame-invertibility", invertible ? 0.0 : tol.determinant - min_det,
      tol.determinant, invertible});

  const bool homogeneous = push("lambda-homogeneity", max_homogeneity, tol.homogeneity);
  const bool symmetric = push("cartan-total-symmetry", max_symmetry, tol.total_symmetry);
  const bool euler_ok = push("metric-euler", max_euler, tol.metric_euler);

  const bool positive = invertible && min_minor > tol.positive_definite;
  report.conditions.push_back(ValidationCondition{
      "positive-definite", positive ? 0.0 : tol.positive_definite - min_minor,
      tol.positive_definite, positive});

  report.gap_valid = invertible;
  report.lagrange_valid = invertible && euler_ok;
  report.finsler_valid = invertible && euler_ok && symmetric && homogeneous && positive;
  return report;
}

// ---------------------------------------------------------------------------
// Frame synthesis from a metric
// ---------------------------------------------------------------------------

namespace {

ExprPtr expr_sum(ExprPtr a, ExprPtr b) {
  if (!a) return b;
  return Expr::make_binary(BinaryOp::Add, std::move(a), std::move(b));
}

std::vector<EvalPoint> default_probe_points(int n) {
  // Small deterministic probe set spread over the usual sampling box.
  std::vector<EvalPoint> pts;
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next = [&]() {
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    return static_cast<double>((state * 0x2545f4914f6cdd1dull) >> 11) * 0x1.0p-53;
  };
  for (int k = 0; k < 16; ++k) {
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = 2.0 * next() - 1.0;
      y[static_cast<std::size_t>(i)] = (next() < 0.5 ? -1.0 : 1.0) * (0.5 + 1.2 * next());
    }
    pts.emplace_back(std::move(x), std::move(y));
  }
  return pts;
}

}  // namespace

FrameDocument frame_from_metric(const std::vector<std::vector<std::string>>& g_exprs,
                                int n, const std::string& name,
                                std::span<const EvalPoint> probes) {
  if (n < 2) throw Error("frame_from_metric: dimension must be at least 2");
  if (static_cast<int>(g_exprs.size()) != n) {
    throw Error("frame_from_metric: metric grid must have n rows");
  }
  std::vector<std::vector<ExprPtr>> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(g_exprs[static_cast<std::size_t>(i)].size()) != n) {
      throw Error("frame_from_metric: metric grid must be n x n");
    }
    for (int j = 0; j < n; ++j) {
      g[static_cast<std::size_t>(i)].push_back(
          parse_expression(g_exprs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], n));
    }
  }

  std::vector<EvalPoint> default_probes;
  if (probes.empty()) {
    default_probes = default_probe_points(n);
    probes = default_probes;
  }

  // Check symmetry and positive definiteness numerically at the probes.
  for (const EvalPoint& p : probes) {
    std::vector<double> m(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        m[static_cast<std::size_t>(i * n + j)] =
            evaluate_real(g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], p);
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (std::fabs(m[static_cast<std::size_t>(i * n + j)] -
                      m[static_cast<std::size_t>(j * n + i)]) > 1e-12) {
          throw Error("frame_from_metric: metric is not symmetric at a probe point");
        }
      }
    }
    // Cholesky on values doubles as the positivity check.
    std::vector<double> chol(m);
    for (int j = 0; j < n; ++j) {
      double d = chol[static_cast<std::size_t>(j * n + j)];
      for (int k = 0; k < j; ++k) {
        d -= chol[static_cast<std::size_t>(j * n + k)] * chol[static_cast<std::size_t>(j * n + k)];
      }
      if (d <= 1e-10) {
        std::ostringstream os;
        os << "frame_from_metric: metric is not positive definite at probe x=(";
        for (int i = 0; i < n; ++i) os << (i ? "," : "") << p.x()[static_cast<std::size_t>(i)];
        os << "), y=(";
        for (int i = 0; i < n; ++i) os << (i ? "," : "") << p.y()[static_cast<std::size_t>(i)];
        os << "): leading minor " << (j + 1) << " fails";
        throw Error(os.str());
      }
      chol[static_cast<std::size_t>(j * n + j)] = std::sqrt(d);
      for (int i = j + 1; i < n; ++i) {
        double s = chol[static_cast<std::size_t>(i * n + j)];
        for (int k = 0; k < j; ++k) {
          s -= chol[static_cast<std::size_t>(i * n + k)] * chol[static_cast<std::size_t>(j * n + k)];
        }
        chol[static_cast<std::size_t>(i * n + j)] = s / chol[static_cast<std::size_t>(j * n + j)];
      }
    }
  }

  // Symbolic Cholesky: g = L L^T with L lower triangular, coframe rows are
  // the rows of L^T and the frame itself is L^{-1}.
  std::vector<std::vector<ExprPtr>> L(static_cast<std::size_t>(n),
                                      std::vector<ExprPtr>(static_cast<std::size_t>(n)));
  for (int j = 0; j < n; ++j) {
    ExprPtr diag;
    for (int k = 0; k < j; ++k) {
      diag = expr_sum(diag, Expr::make_binary(BinaryOp::Mul, L[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)],
                                              L[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]));
    }
    ExprPtr inside = g[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
    if (diag) inside = Expr::make_binary(BinaryOp::Sub, inside, diag);
    L[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] =
        Expr::make_unary(UnaryFn::Sqrt, inside);

    for (int i = j + 1; i < n; ++i) {
      ExprPtr cross;
      for (int k = 0; k < j; ++k) {
        cross = expr_sum(cross, Expr::make_binary(BinaryOp::Mul, L[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                                                  L[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]));
      }
      ExprPtr numer = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (cross) numer = Expr::make_binary(BinaryOp::Sub, numer, cross);
      L[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Expr::make_binary(
          BinaryOp::Div, numer, L[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)]);
    }
  }

  // Frame = L^{-1} (lower triangular), by forward substitution.
  const ExprPtr one = Expr::make_number(1.0);
  std::vector<std::vector<ExprPtr>> inv(static_cast<std::size_t>(n),
                                        std::vector<ExprPtr>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Expr::make_binary(
        BinaryOp::Div, one, L[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]);
    for (int j = i - 1; j >= 0; --j) {
      ExprPtr acc;
      for (int k = j; k < i; ++k) {
        acc = expr_sum(acc, Expr::make_binary(BinaryOp::Mul, L[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                                              inv[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]));
      }
      inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Expr::make_unary(
          UnaryFn::Neg, Expr::make_binary(BinaryOp::Div, acc,
                                          L[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]));
    }
  }

  FrameDocument doc;
  doc.n = n;
  doc.name = name;
  doc.description = "frame synthesized from a metric by triangular factorization";
  doc.frame.resize(static_cast<std::size_t>(n));
  doc.frame_text.resize(static_cast<std::size_t>(n));
  const ExprPtr zero = Expr::make_number(0.0);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < n; ++a) {
      ExprPtr cell = inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
      if (!cell) cell = zero;
      doc.frame[static_cast<std::size_t>(i)].push_back(cell);
      doc.frame_text[static_cast<std::size_t>(i)].push_back(to_string(cell));
    }
  }

  // Round-trip guard: the synthesized frame must reproduce g at the probes.
  Frame synthesized(doc);
  for (const EvalPoint& p : probes) {
    const Tensor gt = metric(synthesized, p);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double want =
            evaluate_real(g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], p);
        if (std::fabs(gt.at(i, j) - want) > 1e-10) {
          throw Error("frame_from_metric: synthesized frame failed the metric round trip");
        }
      }
    }
  }
  return doc;
}

}  // namespace fp
