#include "fp/chart.hpp"

#include <cmath>

#include "fp/geometry.hpp"

namespace fp {

namespace {

bool uses_direction_vars(const Expr& e, int n) {
  if (e.kind == Expr::Kind::Variable) return e.var >= n;
  if (e.a && uses_direction_vars(*e.a, n)) return true;
  if (e.b && uses_direction_vars(*e.b, n)) return true;
  return false;
}

/// Plain double matrix inverse (small n).
std::vector<double> invert_values(const std::vector<double>& m, int n) {
  std::vector<double> a = m;
  std::vector<double> inv(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + i)] = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(a[static_cast<std::size_t>(r * n + col)]) >
          std::fabs(a[static_cast<std::size_t>(pivot * n + col)])) {
        pivot = r;
      }
    }
    if (a[static_cast<std::size_t>(pivot * n + col)] == 0.0) {
      throw SingularError("chart Jacobian is singular");
    }
    for (int c = 0; c < n; ++c) {
      std::swap(a[static_cast<std::size_t>(col * n + c)], a[static_cast<std::size_t>(pivot * n + c)]);
      std::swap(inv[static_cast<std::size_t>(col * n + c)], inv[static_cast<std::size_t>(pivot * n + c)]);
    }
    const double scale = 1.0 / a[static_cast<std::size_t>(col * n + col)];
    for (int c = 0; c < n; ++c) {
      a[static_cast<std::size_t>(col * n + c)] *= scale;
      inv[static_cast<std::size_t>(col * n + c)] *= scale;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[static_cast<std::size_t>(r * n + col)];
      for (int c = 0; c < n; ++c) {
        a[static_cast<std::size_t>(r * n + c)] -= f * a[static_cast<std::size_t>(col * n + c)];
        inv[static_cast<std::size_t>(r * n + c)] -= f * inv[static_cast<std::size_t>(col * n + c)];
      }
    }
  }
  return inv;
}

}  // namespace

ChartMap ChartMap::from_strings(const std::vector<std::string>& texts, int n) {
  ChartMap c;
  c.n = n;
  if (static_cast<int>(texts.size()) != n) {
    throw Error("ChartMap: one expression per position coordinate required");
  }
  for (const std::string& t : texts) {
    ExprPtr e = parse_expression(t, n);
    if (uses_direction_vars(*e, n)) {
      throw Error("ChartMap: chart expressions may only use x variables");
    }
    c.exprs.push_back(std::move(e));
  }
  return c;
}

ChartMap ChartMap::from_document(const FrameDocument& doc) {
  if (!doc.has_chart_map()) {
    throw Error("ChartMap: the frame document has no chart_map");
  }
  ChartMap c;
  c.n = doc.n;
  c.exprs = doc.chart_map;
  return c;
}

IdentityResidual chart_transform_check(const Frame& frame, const ChartMap& chart,
                                       std::span<const EvalPoint> samples,
                                       double tolerance) {
  if (chart.n != frame.n()) throw Error("chart_transform_check: dimension mismatch");
  const int n = frame.n();
  const int order = 4;

  ResidualAccumulator acc;

  for (const EvalPoint& p : samples) {
    // Original-chart pipeline.
    GeometryContext ctx(frame, p, order);
    const JetGrid& n_old = ctx.barthel();

    // Chart map and its Jacobian as jets of the original chart variables.
    std::vector<Jet> phi;
    std::vector<Jet> p_jets;  // row-major [mu'][nu]
    for (int mu = 0; mu < n; ++mu) {
      phi.push_back(evaluate_with(chart.exprs[static_cast<std::size_t>(mu)], ctx.seeds()));
    }
    std::vector<double> p_val(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        Jet d = phi[static_cast<std::size_t>(mu)].derivative(nu);
        p_val[static_cast<std::size_t>(mu * n + nu)] = d.value();
        p_jets.push_back(std::move(d));
      }
    }
    const std::vector<double> p_inv = invert_values(p_val, n);

    // Primed point.
    std::vector<double> xp(static_cast<std::size_t>(n));
    std::vector<double> yp(static_cast<std::size_t>(n), 0.0);
    for (int mu = 0; mu < n; ++mu) {
      xp[static_cast<std::size_t>(mu)] = phi[static_cast<std::size_t>(mu)].value();
      for (int nu = 0; nu < n; ++nu) {
        yp[static_cast<std::size_t>(mu)] +=
            p_val[static_cast<std::size_t>(mu * n + nu)] * p.y()[static_cast<std::size_t>(nu)];
      }
    }
    const EvalPoint primed(xp, yp);
    const std::vector<Jet> primed_seeds = jet_lift(primed, order);

    // Local inverse of the chart as jets of the primed variables, by a
    // fixed-point iteration that gains one truncation degree per step.
    std::vector<Jet> inverse_x;
    for (int nu = 0; nu < n; ++nu) {
      Jet x0 = Jet::constant(primed_seeds[0].space(), p.x()[static_cast<std::size_t>(nu)], order);
      for (int mu = 0; mu < n; ++mu) {
        x0 += p_inv[static_cast<std::size_t>(nu * n + mu)] *
              (primed_seeds[static_cast<std::size_t>(mu)] - xp[static_cast<std::size_t>(mu)]);
      }
      inverse_x.push_back(std::move(x0));
    }
    std::vector<Jet> args(static_cast<std::size_t>(2 * n));
    auto refresh_args = [&]() {
      for (int v = 0; v < n; ++v) {
        args[static_cast<std::size_t>(v)] = inverse_x[static_cast<std::size_t>(v)];
        args[static_cast<std::size_t>(n + v)] = primed_seeds[static_cast<std::size_t>(n + v)];
      }
    };
    for (int iter = 0; iter < order; ++iter) {
      refresh_args();
      std::vector<Jet> residual;
      for (int mu = 0; mu < n; ++mu) {
        residual.push_back(primed_seeds[static_cast<std::size_t>(mu)] -
                           evaluate_with(chart.exprs[static_cast<std::size_t>(mu)], args));
      }
      for (int nu = 0; nu < n; ++nu) {
        for (int mu = 0; mu < n; ++mu) {
          inverse_x[static_cast<std::size_t>(nu)] +=
              p_inv[static_cast<std::size_t>(nu * n + mu)] * residual[static_cast<std::size_t>(mu)];
        }
      }
    }
    refresh_args();
    for (int mu = 0; mu < n; ++mu) {
      const Jet check =
          evaluate_with(chart.exprs[static_cast<std::size_t>(mu)], args) -
          primed_seeds[static_cast<std::size_t>(mu)];
      if (max_coefficient_difference(check, Jet::constant(check.space(), 0.0, check.order())) >
          1e-9) {
        throw Error("chart_transform_check: chart inversion did not converge");
      }
    }

    // Jacobian along the inverse, and the unprimed directions as functions
    // of the primed chart.
    JetGrid p_comp(n, {Variance::Upper, Variance::Lower});
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        p_comp.at(mu, nu) = p_jets[static_cast<std::size_t>(mu * n + nu)].substitute(args);
      }
    }
    const JetGrid q = invert_jet_matrix(p_comp);  // [nu][mu']: dx^nu / dx'^mu'
    std::vector<Jet> y_unprimed;
    for (int nu = 0; nu < n; ++nu) {
      Jet sum = q.at(nu, 0) * primed_seeds[static_cast<std::size_t>(n + 0)];
      for (int sg = 1; sg < n; ++sg) {
        sum += q.at(nu, sg) * primed_seeds[static_cast<std::size_t>(n + sg)];
      }
      y_unprimed.push_back(std::move(sum));
    }

    // Transformed frame as jets of the primed chart, then the Barthel
    // connection recomputed from scratch.
    std::vector<Jet> frame_args(static_cast<std::size_t>(2 * n));
    for (int v = 0; v < n; ++v) {
      frame_args[static_cast<std::size_t>(v)] = inverse_x[static_cast<std::size_t>(v)];
      frame_args[static_cast<std::size_t>(n + v)] = y_unprimed[static_cast<std::size_t>(v)];
    }
    JetGrid lambda_primed(n, {Variance::Mesh, Variance::Upper});
    for (int leg = 0; leg < n; ++leg) {
      for (int a = 0; a < n; ++a) {
        Jet sum = p_comp.at(a, 0) *
                  evaluate_with(frame.document().frame[static_cast<std::size_t>(leg)][0], frame_args);
        for (int b = 1; b < n; ++b) {
          sum += p_comp.at(a, b) *
                 evaluate_with(frame.document().frame[static_cast<std::size_t>(leg)][static_cast<std::size_t>(b)],
                               frame_args);
        }
        lambda_primed.at(leg, a) = std::move(sum);
      }
    }
    GeometryContext primed_ctx(std::move(lambda_primed), primed);
    const JetGrid& n_new = primed_ctx.barthel();

    // Law route: p N p^{-1} plus the inhomogeneous second-derivative term.
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        double law = 0.0;
        for (int c = 0; c < n; ++c) {
          for (int d = 0; d < n; ++d) {
            law += p_val[static_cast<std::size_t>(a * n + c)] * n_old.at(c, d).value() *
                   p_inv[static_cast<std::size_t>(d * n + b)];
          }
        }
        for (int mu = 0; mu < n; ++mu) {
          for (int sg = 0; sg < n; ++sg) {
            MultiIndex second(2 * n);
            second.bump(b, 1);
            second.bump(sg, 1);
            law += p_val[static_cast<std::size_t>(a * n + mu)] *
                   inverse_x[static_cast<std::size_t>(mu)].partial(second) *
                   yp[static_cast<std::size_t>(sg)];
          }
        }
        acc.add(n_new.at(a, b).value(), law);
      }
    }
  }

  IdentityResidual out;
  out.name = "chart-transform";
  out.residual = acc.relative();
  out.signed_residual = acc.signed_max();
  out.tolerance = tolerance;
  out.samples = static_cast<long>(samples.size());
  out.pass = out.residual <= out.tolerance;
  return out;
}

}  // namespace fp
