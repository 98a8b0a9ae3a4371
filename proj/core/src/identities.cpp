#include "fp/identities.hpp"

#include <cmath>
#include <functional>

#include "fp/classify.hpp"
#include "fp/covariant.hpp"
#include "fp/torsion_curvature.hpp"

namespace fp {

void ResidualAccumulator::add(double lhs, double rhs) {
  const double diff = lhs - rhs;
  if (std::fabs(diff) > max_diff_) {
    max_diff_ = std::fabs(diff);
    signed_diff_ = diff;
  }
  max_scale_ = std::max({max_scale_, std::fabs(lhs), std::fabs(rhs)});
}

void ResidualAccumulator::add_grids(const JetGrid& lhs, const JetGrid& rhs) {
  if (lhs.flat().size() != rhs.flat().size()) {
    throw Error("ResidualAccumulator: grid shape mismatch");
  }
  for (std::size_t k = 0; k < lhs.flat().size(); ++k) {
    add(lhs.flat()[k].value(), rhs.flat()[k].value());
  }
}

void ResidualAccumulator::add_grid_zero(const JetGrid& lhs) {
  for (const Jet& j : lhs.flat()) add(j.value(), 0.0);
}

void ResidualAccumulator::scale_hint(double magnitude) {
  max_scale_ = std::max(max_scale_, std::fabs(magnitude));
}

namespace {

using PerSample = std::function<void(ResidualAccumulator&, FrameSampler&, std::size_t)>;
using WholeRun = std::function<IdentityResidual(FrameSampler&, const IdentityOptions&)>;

struct Entry {
  std::string name;
  double tolerance;
  bool scale_relative = true;
  bool needs_finsler = false;
  PerSample per_sample;
  WholeRun whole;
};

// ---------------------------------------------------------------------------
// Identity bodies
// ---------------------------------------------------------------------------

void duality(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const JetGrid& lam = ctx.lambda();
  const JetGrid& cf = ctx.coframe();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double mesh_sum = 0.0;
      for (int k = 0; k < n; ++k) mesh_sum += lam.at(k, a).value() * cf.at(k, b).value();
      acc.add(mesh_sum, a == b ? 1.0 : 0.0);
      double world_sum = 0.0;
      for (int k = 0; k < n; ++k) world_sum += lam.at(a, k).value() * cf.at(b, k).value();
      acc.add(world_sum, a == b ? 1.0 : 0.0);
    }
  }
}

void finsler_norm(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  // F^2 = g_mn y^m y^n = sum_i (coframe_i_m y^m)^2
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const JetGrid& cf = ctx.coframe();
  double squares = 0.0;
  for (int leg = 0; leg < n; ++leg) {
    double c = 0.0;
    for (int mu = 0; mu < n; ++mu) {
      c += cf.at(leg, mu).value() * ctx.point().y()[static_cast<std::size_t>(mu)];
    }
    squares += c * c;
  }
  acc.add(ctx.lagrangian().value(), squares);
}

void metric_coincidence(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const Jet& lag = ctx.lagrangian();
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      const double hess = 0.5 * ctx.dy(ctx.dy(lag, mu), nu).value();
      acc.add(ctx.metric().at(mu, nu).value(), hess);
    }
  }
}

void euler_metric(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  for (int a = 0; a < n; ++a) {
    for (int nu = 0; nu < n; ++nu) {
      double r = 0.0;
      for (int mu = 0; mu < n; ++mu) {
        r += ctx.point().y()[static_cast<std::size_t>(mu)] *
             ctx.dy(ctx.metric().at(mu, nu), a).value();
      }
      acc.add_zero(r);
      acc.scale_hint(ctx.metric().at(nu, nu).value());
    }
  }
}

void cartan_axioms(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const JetConnection& conn = ctx.connection(ConnectionKind::CartanMiron);

  // C1: N^a_b = y^m F^a_bm (zero deflection).
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double r = 0.0;
      for (int mu = 0; mu < n; ++mu) {
        r += ctx.point().y()[static_cast<std::size_t>(mu)] * conn.F.at(a, b, mu).value();
      }
      acc.add(conn.N.at(a, b).value(), r);
    }
  }
  // C2 / C3: h- and v-metricity.
  acc.add_grid_zero(h_covariant(ctx, ConnectionKind::CartanMiron, ctx.metric()));
  acc.add_grid_zero(v_covariant(ctx, ConnectionKind::CartanMiron, ctx.metric()));
  acc.scale_hint(ctx.metric().max_abs_coefficient() *
                 (1.0 + conn.N.max_abs_value() + conn.F.max_abs_value() +
                  conn.C.max_abs_value()));
  // C4 / C5: symmetric horizontal and vertical coefficients.
  const TorsionSet& tors = s.torsions(i, ConnectionKind::CartanMiron);
  acc.add_grid_zero(tors.hh);
  acc.add_grid_zero(tors.vv);
}

void berwald_axioms(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const JetConnection& conn = ctx.connection(ConnectionKind::Berwald);

  // B1: zero deflection.
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double r = 0.0;
      for (int mu = 0; mu < n; ++mu) {
        r += ctx.point().y()[static_cast<std::size_t>(mu)] * conn.F.at(a, b, mu).value();
      }
      acc.add(conn.N.at(a, b).value(), r);
    }
  }
  // B2: delta F = 0 for the Finsler norm.
  const Jet f = sqrt(ctx.lagrangian());
  for (int mu = 0; mu < n; ++mu) acc.add_zero(ctx.delta(f, mu).value());
  acc.scale_hint(f.max_abs_coefficient() * (1.0 + conn.N.max_abs_value()));
  // B3: symmetric coefficients; B4: no vertical coefficients.
  const TorsionSet& tors = s.torsions(i, ConnectionKind::Berwald);
  acc.add_grid_zero(tors.hh);
  acc.add_grid_zero(conn.C);
  // B5: F^a_mn = dy_m N^a_n.
  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        acc.add(conn.F.at(a, mu, nu).value(), ctx.dy(conn.N.at(a, nu), mu).value());
      }
    }
  }
}

void ap_condition(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const GeometryContext& ctx = s.context(i);
  acc.add_grid_zero(h_covariant(ctx, ConnectionKind::Canonical, ctx.lambda()));
  acc.add_grid_zero(v_covariant(ctx, ConnectionKind::Canonical, ctx.lambda()));
  // a cancellation identity: the scale is the magnitude of the terms that
  // cancel (frame jets against connection coefficients), which grow near
  // the axis singularities of triangular frames
  const JetConnection& conn = ctx.connection(ConnectionKind::Canonical);
  acc.scale_hint(ctx.lambda().max_abs_coefficient() *
                 (1.0 + conn.N.max_abs_value() + conn.F.max_abs_value() +
                  conn.C.max_abs_value()));
}

void barthel_building_blocks(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  // N^a_m = y^b lambda_i^a (delta_m coframe_i_b - coframe_i_b miron-h-derived),
  // equivalently the zero-deflection form y^b Gamma_miron^a_bm.
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const JetGrid mc = h_covariant(ctx, ConnectionKind::CartanMiron, ctx.coframe());
  const JetGrid& lam = ctx.lambda();
  const JetGrid& cf = ctx.coframe();
  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      double rhs = 0.0;
      for (int b = 0; b < n; ++b) {
        double mesh = 0.0;
        for (int leg = 0; leg < n; ++leg) {
          mesh += lam.at(leg, a).value() *
                  (ctx.delta(cf.at(leg, b), mu).value() - mc.at(leg, b, mu).value());
        }
        rhs += ctx.point().y()[static_cast<std::size_t>(b)] * mesh;
      }
      acc.add(ctx.barthel().at(a, mu).value(), rhs);
    }
  }
}

void shared_r(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const JetGrid& reference = s.torsions(i, ConnectionKind::CartanMiron).vh;
  for (ConnectionKind kind : {ConnectionKind::Canonical, ConnectionKind::Dual,
                              ConnectionKind::Berwald}) {
    acc.add_grids(s.torsions(i, kind).vh, reference);
  }
}

void canonical_flat(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const GeometryContext& ctx = s.context(i);
  const CurvatureSet& curv = s.curvatures(i, ConnectionKind::Canonical);
  acc.add_grid_zero(curv.h);
  acc.add_grid_zero(curv.hv);
  acc.add_grid_zero(curv.v);
  // cancellation scale: derivative and product terms of the coefficients
  const JetConnection& conn = ctx.connection(ConnectionKind::Canonical);
  const double coeff = conn.F.max_abs_coefficient() + conn.C.max_abs_coefficient();
  const double value = conn.F.max_abs_value() + conn.C.max_abs_value();
  acc.scale_hint(coeff * (1.0 + conn.N.max_abs_value()) + value * value);
}

void cartan_from_canonical(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const GeometryContext& ctx = s.context(i);
  const JetConnection& cartan = ctx.connection(ConnectionKind::CartanMiron);
  const JetConnection& canonical = ctx.connection(ConnectionKind::Canonical);
  const JetGrid& A = ctx.contortion_h();
  const JetGrid& B = ctx.contortion_v();
  const int n = ctx.n();
  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        acc.add(cartan.F.at(a, mu, nu).value(),
                canonical.F.at(a, mu, nu).value() - A.at(a, mu, nu).value());
        acc.add(cartan.C.at(a, mu, nu).value(),
                canonical.C.at(a, mu, nu).value() - B.at(a, mu, nu).value());
      }
    }
  }
}

void berwald_from_canonical(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const GeometryContext& ctx = s.context(i);
  const JetConnection& canonical = ctx.connection(ConnectionKind::Canonical);
  const JetGrid& p = s.torsions(i, ConnectionKind::Canonical).vhv;
  const JetGrid& berwald = ctx.berwald_coefficients();
  const int n = ctx.n();
  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        acc.add(berwald.at(a, mu, nu).value(),
                canonical.F.at(a, mu, nu).value() + p.at(a, mu, nu).value());
      }
    }
  }
}

void canonical_hv_torsion(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  // The canonical vhv-torsion from the Cartan tensor and the contortions:
  //   P^a_mn = y^b [ (C-B)|b - (C-B)^e_mn A^a_eb + (C-B)^a_en A^e_mb
  //                + (C-B)^a_me A^e_nb ] - A^a_mn,
  // the bracket being the Miron-derivative of the Cartan vertical
  // coefficients moved to canonical derivatives. Holds at Finsler level,
  // where the Cartan vhv-torsion is the y-contracted derivative of the
  // Cartan tensor.
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const JetConnection& canonical = ctx.connection(ConnectionKind::Canonical);
  const JetGrid& A = ctx.contortion_h();
  const JetGrid& B = ctx.contortion_v();
  const JetGrid c_cov = h_covariant(ctx, ConnectionKind::Canonical, canonical.C);
  const JetGrid b_cov = h_covariant(ctx, ConnectionKind::Canonical, B);
  const JetGrid& direct = s.torsions(i, ConnectionKind::Canonical).vhv;
  const auto& y = ctx.point().y();

  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        double sum = 0.0;
        for (int b = 0; b < n; ++b) {
          double bracket = c_cov.at(a, mu, nu, b).value() - b_cov.at(a, mu, nu, b).value();
          for (int e = 0; e < n; ++e) {
            const auto cb = [&](int p1, int p2, int p3) {
              return canonical.C.at(p1, p2, p3).value() - B.at(p1, p2, p3).value();
            };
            bracket -= cb(e, mu, nu) * A.at(a, e, b).value();
            bracket += cb(a, e, nu) * A.at(e, mu, b).value();
            bracket += cb(a, mu, e) * A.at(e, nu, b).value();
          }
          sum += y[static_cast<std::size_t>(b)] * bracket;
        }
        sum -= A.at(a, mu, nu).value();
        acc.add(direct.at(a, mu, nu).value(), sum);
      }
    }
  }
}

void dual_torsions(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const TorsionSet& dual = s.torsions(i, ConnectionKind::Dual);
  const TorsionSet& canonical = s.torsions(i, ConnectionKind::Canonical);
  const int n = s.context(i).n();
  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        acc.add(dual.hh.at(a, mu, nu).value(), -canonical.hh.at(a, mu, nu).value());
        acc.add(dual.hhv.at(a, mu, nu).value(), canonical.hhv.at(a, nu, mu).value());
        acc.add(dual.vhv.at(a, mu, nu).value(), canonical.vhv.at(a, nu, mu).value());
        acc.add(dual.vv.at(a, mu, nu).value(), -canonical.vv.at(a, mu, nu).value());
      }
    }
  }
}

void dual_curvatures(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const CurvatureSet& dual = s.curvatures(i, ConnectionKind::Dual);
  const TorsionSet& can = s.torsions(i, ConnectionKind::Canonical);
  const JetGrid& c = ctx.connection(ConnectionKind::Canonical).C;
  const JetGrid t_hcov = h_covariant(ctx, ConnectionKind::Canonical, can.hh);
  const JetGrid t_vcov = v_covariant(ctx, ConnectionKind::Canonical, can.hh);
  const JetGrid s_hcov = h_covariant(ctx, ConnectionKind::Canonical, can.vv);
  const JetGrid s_vcov = v_covariant(ctx, ConnectionKind::Canonical, can.vv);

  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int sg = 0; sg < n; ++sg) {
        for (int nu = 0; nu < n; ++nu) {
          // h-curvature: R~^a_{mu sg nu} = T^a_{sg nu | mu} + C^a_{e mu} R^e_{sg nu}
          //            + C^a_{sg e} R^e_{nu mu} + C^a_{nu e} R^e_{mu sg}
          double rhs = t_hcov.at(a, sg, nu, mu).value();
          for (int e = 0; e < n; ++e) {
            rhs += c.at(a, e, mu).value() * can.vh.at(e, sg, nu).value();
            rhs += c.at(a, sg, e).value() * can.vh.at(e, nu, mu).value();
            rhs += c.at(a, nu, e).value() * can.vh.at(e, mu, sg).value();
          }
          acc.add(dual.h.at(a, mu, sg, nu).value(), rhs);

          // v-curvature: S~^a_{mu sg nu} = S^a_{sg nu || mu}
          acc.add(dual.v.at(a, mu, sg, nu).value(), s_vcov.at(a, sg, nu, mu).value());
        }
      }
    }
  }

  // hv-curvature: the dual shifts the canonical triple by its own torsions
  // (F-transpose = F - T, C-transpose = C - S), so the shifted-connection
  // expansion against canonical flatness gives
  //   P~^a_mns = S^a_{ms|n} + S^a_me T^e_sn - T^a_{mn||s} - T^a_me C^e_ns
  //            - S^e_ms T^a_en + S^a_es T^e_mn - S^a_me P^e_ns.
  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        for (int sg = 0; sg < n; ++sg) {
          double rhs = s_hcov.at(a, mu, sg, nu).value() - t_vcov.at(a, mu, nu, sg).value();
          for (int e = 0; e < n; ++e) {
            rhs += can.vv.at(a, mu, e).value() * can.hh.at(e, sg, nu).value();
            rhs -= can.hh.at(a, mu, e).value() * c.at(e, nu, sg).value();
            rhs -= can.vv.at(e, mu, sg).value() * can.hh.at(a, e, nu).value();
            rhs += can.vv.at(a, e, sg).value() * can.hh.at(e, mu, nu).value();
            rhs -= can.vv.at(a, mu, e).value() * can.vhv.at(e, nu, sg).value();
          }
          acc.add(dual.hv.at(a, mu, nu, sg).value(), rhs);
        }
      }
    }
  }
}

void cartan_torsions(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const TorsionSet& cartan = s.torsions(i, ConnectionKind::CartanMiron);
  const TorsionSet& can = s.torsions(i, ConnectionKind::Canonical);
  const JetGrid& A = ctx.contortion_h();
  const JetGrid& B = ctx.contortion_v();

  acc.add_grid_zero(cartan.hh);
  acc.add_grid_zero(cartan.vv);
  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        acc.add(cartan.hhv.at(a, mu, nu).value(),
                can.hhv.at(a, mu, nu).value() - B.at(a, mu, nu).value());
        acc.add(cartan.vhv.at(a, mu, nu).value(),
                can.vhv.at(a, mu, nu).value() + A.at(a, mu, nu).value());
      }
    }
  }
}

void cartan_curvatures(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const CurvatureSet& cartan = s.curvatures(i, ConnectionKind::CartanMiron);
  const TorsionSet& can = s.torsions(i, ConnectionKind::Canonical);
  const JetGrid& A = ctx.contortion_h();
  const JetGrid& B = ctx.contortion_v();
  const JetGrid& c = ctx.connection(ConnectionKind::Canonical).C;
  const JetGrid a_hcov = h_covariant(ctx, ConnectionKind::Canonical, A);
  const JetGrid a_vcov = v_covariant(ctx, ConnectionKind::Canonical, A);
  const JetGrid b_hcov = h_covariant(ctx, ConnectionKind::Canonical, B);
  const JetGrid b_vcov = v_covariant(ctx, ConnectionKind::Canonical, B);

  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        for (int sg = 0; sg < n; ++sg) {
          // h-curvature: U_(sg,nu){ A^a_{mu sg | nu} + A^e_{mu nu} A^a_{e sg} }
          //            + A^a_{mu e} T^e_{sg nu} + B^a_{mu e} R^e_{sg nu}
          double rhs = a_hcov.at(a, mu, sg, nu).value() - a_hcov.at(a, mu, nu, sg).value();
          for (int e = 0; e < n; ++e) {
            rhs += A.at(e, mu, nu).value() * A.at(a, e, sg).value();
            rhs -= A.at(e, mu, sg).value() * A.at(a, e, nu).value();
            rhs += A.at(a, mu, e).value() * can.hh.at(e, sg, nu).value();
            rhs += B.at(a, mu, e).value() * can.vh.at(e, sg, nu).value();
          }
          acc.add(cartan.h.at(a, mu, nu, sg).value(), rhs);

          // hv-curvature from the contortion shift:
          //   B^a_{mu sg | nu} + B^a_{mu e} T^e_{sg nu} - A^a_{mu nu || sg}
          //   - A^a_{mu e} C^e_{nu sg} - B^e_{mu sg} A^a_{e nu}
          //   + B^a_{e sg} A^e_{mu nu} - B^a_{mu e} P^e_{nu sg}
          double p = b_hcov.at(a, mu, sg, nu).value() - a_vcov.at(a, mu, nu, sg).value();
          for (int e = 0; e < n; ++e) {
            p += B.at(a, mu, e).value() * can.hh.at(e, sg, nu).value();
            p -= A.at(a, mu, e).value() * c.at(e, nu, sg).value();
            p -= B.at(e, mu, sg).value() * A.at(a, e, nu).value();
            p += B.at(a, e, sg).value() * A.at(e, mu, nu).value();
            p -= B.at(a, mu, e).value() * can.vhv.at(e, nu, sg).value();
          }
          acc.add(cartan.hv.at(a, mu, nu, sg).value(), p);

          // v-curvature: U_(sg,nu){ B^a_{mu sg || nu} + B^e_{mu nu} B^a_{e sg} }
          //            + B^a_{mu e} S^e_{sg nu}
          double v = b_vcov.at(a, mu, sg, nu).value() - b_vcov.at(a, mu, nu, sg).value();
          for (int e = 0; e < n; ++e) {
            v += B.at(e, mu, nu).value() * B.at(a, e, sg).value();
            v -= B.at(e, mu, sg).value() * B.at(a, e, nu).value();
            v += B.at(a, mu, e).value() * can.vv.at(e, sg, nu).value();
          }
          acc.add(cartan.v.at(a, mu, nu, sg).value(), v);
        }
      }
    }
  }
}

void berwald_torsions(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const TorsionSet& berwald = s.torsions(i, ConnectionKind::Berwald);
  acc.add_grid_zero(berwald.hh);
  acc.add_grid_zero(berwald.hhv);
  acc.add_grid_zero(berwald.vhv);
  acc.add_grid_zero(berwald.vv);
  acc.add_grids(berwald.vh, s.torsions(i, ConnectionKind::CartanMiron).vh);
}

void berwald_curvatures(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const CurvatureSet& berwald = s.curvatures(i, ConnectionKind::Berwald);
  const TorsionSet& can = s.torsions(i, ConnectionKind::Canonical);
  const JetGrid& c = ctx.connection(ConnectionKind::Canonical).C;
  const JetGrid& gamma_can = ctx.connection(ConnectionKind::Canonical).F;
  const JetGrid p_hcov = h_covariant(ctx, ConnectionKind::Canonical, can.vhv);

  acc.add_grid_zero(berwald.v);

  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        for (int sg = 0; sg < n; ++sg) {
          // h-curvature: U_(nu,sg){ P^a_{mu nu | sg} + P^e_{mu nu} P^a_{e sg} }
          //            + P^a_{mu e} T^e_{nu sg} - C^a_{mu e} R^e_{nu sg}
          double rhs = p_hcov.at(a, mu, nu, sg).value() - p_hcov.at(a, mu, sg, nu).value();
          for (int e = 0; e < n; ++e) {
            rhs += can.vhv.at(e, mu, nu).value() * can.vhv.at(a, e, sg).value();
            rhs -= can.vhv.at(e, mu, sg).value() * can.vhv.at(a, e, nu).value();
            rhs += can.vhv.at(a, mu, e).value() * can.hh.at(e, nu, sg).value();
            rhs -= c.at(a, mu, e).value() * can.vh.at(e, nu, sg).value();
          }
          acc.add(berwald.h.at(a, mu, nu, sg).value(), rhs);

          // hv-curvature, literal placement P-bar^a_{nu mu sg}:
          //   dy_sg P^a_{nu mu} + dy_sg Gamma^a_{nu mu}
          const double lhs = berwald.hv.at(a, nu, mu, sg).value();
          const double drhs = ctx.dy(can.vhv.at(a, nu, mu), sg).value() +
                              ctx.dy(gamma_can.at(a, nu, mu), sg).value();
          acc.add(lhs, drhs);
        }
      }
    }
  }
}

void contortion_torsion(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  // Lowered contortion from lowered torsion:
  //   A_mns = (T_mns + T_snm + T_nsm) / 2, same shape for B with S.
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const TorsionSet& can = s.torsions(i, ConnectionKind::Canonical);
  const JetGrid& A = ctx.contortion_h();
  const JetGrid& B = ctx.contortion_v();
  const JetGrid& g = ctx.metric();

  auto lowered = [&](const JetGrid& x, int m, int nn, int sg) {
    double r = 0.0;
    for (int e = 0; e < n; ++e) r += g.at(e, m).value() * x.at(e, nn, sg).value();
    return r;
  };

  for (int m = 0; m < n; ++m) {
    for (int nn = 0; nn < n; ++nn) {
      for (int sg = 0; sg < n; ++sg) {
        acc.add(lowered(A, m, nn, sg),
                0.5 * (lowered(can.hh, m, nn, sg) + lowered(can.hh, sg, nn, m) +
                       lowered(can.hh, nn, sg, m)));
        acc.add(lowered(B, m, nn, sg),
                0.5 * (lowered(can.vv, m, nn, sg) + lowered(can.vv, sg, nn, m) +
                       lowered(can.vv, nn, sg, m)));
      }
    }
  }
}

void interchange(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  // Moving between the Miron and canonical horizontal derivatives of a
  // (1,2) tensor costs contortion terms:
  //   X^a_{mn o|b} = X^a_{mn|b} - X^e_{mn} A^a_{eb} + X^a_{en} A^e_{mb}
  //                + X^a_{me} A^e_{nb},
  // exercised here on the canonical vertical coefficients.
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const JetGrid& x = ctx.connection(ConnectionKind::Canonical).C;
  const JetGrid& A = ctx.contortion_h();
  const JetGrid miron = h_covariant(ctx, ConnectionKind::CartanMiron, x);
  const JetGrid canon = h_covariant(ctx, ConnectionKind::Canonical, x);

  for (int a = 0; a < n; ++a) {
    for (int m = 0; m < n; ++m) {
      for (int nn = 0; nn < n; ++nn) {
        for (int b = 0; b < n; ++b) {
          double rhs = canon.at(a, m, nn, b).value();
          for (int e = 0; e < n; ++e) {
            rhs -= x.at(e, m, nn).value() * A.at(a, e, b).value();
            rhs += x.at(a, e, nn).value() * A.at(e, m, b).value();
            rhs += x.at(a, m, e).value() * A.at(e, nn, b).value();
          }
          acc.add(miron.at(a, m, nn, b).value(), rhs);
        }
      }
    }
  }
}

void miron_coframe(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  // Gamma = Gamma_miron + lambda (coframe miron-h-derivative), likewise
  // vertically, and the frame contraction of the derivative is the
  // h-contortion.
  const GeometryContext& ctx = s.context(i);
  const int n = ctx.n();
  const JetGrid h = h_covariant(ctx, ConnectionKind::CartanMiron, ctx.coframe());
  const JetGrid v = v_covariant(ctx, ConnectionKind::CartanMiron, ctx.coframe());
  const JetConnection& cartan = ctx.connection(ConnectionKind::CartanMiron);
  const JetConnection& canonical = ctx.connection(ConnectionKind::Canonical);
  const JetGrid& lam = ctx.lambda();
  const JetGrid& A = ctx.contortion_h();

  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        double hsum = 0.0;
        double vsum = 0.0;
        for (int leg = 0; leg < n; ++leg) {
          hsum += lam.at(leg, a).value() * h.at(leg, mu, nu).value();
          vsum += lam.at(leg, a).value() * v.at(leg, mu, nu).value();
        }
        acc.add(canonical.F.at(a, mu, nu).value(), cartan.F.at(a, mu, nu).value() + hsum);
        acc.add(canonical.C.at(a, mu, nu).value(), cartan.C.at(a, mu, nu).value() + vsum);
        acc.add(A.at(a, mu, nu).value(), hsum);
      }
    }
  }
}

void table_1(ResidualAccumulator& acc, FrameSampler& s, std::size_t i) {
  // The definite cells of the connection summary: everything the other
  // registry entries pin, gathered per column.
  cartan_torsions(acc, s, i);
  dual_torsions(acc, s, i);
  berwald_torsions(acc, s, i);
  shared_r(acc, s, i);
  canonical_flat(acc, s, i);
  const CurvatureSet& berwald = s.curvatures(i, ConnectionKind::Berwald);
  acc.add_grid_zero(berwald.v);
}

}  // namespace

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

namespace {

IdentityResidual run_table(FrameSampler& sampler, const std::string& identity_name,
                           const std::string& class_name, double tolerance,
                           const IdentityOptions& options) {
  ClassifyOptions copts;
  copts.natural_chart = options.natural_chart || sampler.frame().document().natural_chart;
  if (options.tolerance) copts.tolerance = *options.tolerance;

  IdentityResidual out;
  out.name = identity_name;
  out.tolerance = options.tolerance.value_or(tolerance);
  out.samples = static_cast<long>(sampler.size());

  std::vector<IdentityResidual> cells = verify_special_tables(sampler, class_name, copts);
  if (cells.size() == 1 && cells.front().skipped_reason) {
    out.pass = true;
    out.skipped_reason = cells.front().skipped_reason;
    return out;
  }
  out.pass = true;
  for (const auto& cell : cells) {
    if (cell.skipped_reason) continue;
    if (cell.residual > out.residual) {
      out.residual = cell.residual;
      out.signed_residual = cell.signed_residual;
    }
  }
  out.pass = out.residual <= out.tolerance;
  return out;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> r;
    auto add = [&](std::string name, double tol, bool finsler, PerSample fn,
                   bool scale_relative = true) {
      r.push_back(Entry{std::move(name), tol, scale_relative, finsler, std::move(fn), {}});
    };

    add("duality", 1e-12, false, duality);
    add("finsler-norm", 1e-12, false, finsler_norm);
    add("metric-coincidence", 1e-8, true, metric_coincidence, /*scale_relative=*/false);
    add("euler-metric", 1e-8, true, euler_metric);
    add("cartan-axioms", 1e-8, true, cartan_axioms);
    add("berwald-axioms", 1e-8, true, berwald_axioms);
    add("ap-condition", 1e-9, false, ap_condition);
    add("barthel-building-blocks", 1e-8, true, barthel_building_blocks);
    add("shared-R", 1e-9, false, shared_r);
    add("canonical-flat", 1e-8, false, canonical_flat);
    add("cartan-from-canonical", 1e-9, false, cartan_from_canonical);
    add("berwald-from-canonical", 1e-8, false, berwald_from_canonical);
    add("canonical-hv-torsion", 1e-8, true, canonical_hv_torsion);
    add("dual-torsions", 1e-9, false, dual_torsions);
    add("dual-curvatures", 1e-7, false, dual_curvatures);
    add("cartan-torsions", 1e-9, false, cartan_torsions);
    add("cartan-curvatures", 1e-7, false, cartan_curvatures);
    add("berwald-torsions", 1e-9, false, berwald_torsions);
    add("berwald-curvatures", 1e-7, false, berwald_curvatures);
    add("contortion-torsion", 1e-9, false, contortion_torsion);
    add("interchange", 1e-8, false, interchange);
    add("miron-coframe", 1e-9, false, miron_coframe);
    add("table-1", 1e-7, false, table_1);

    auto add_table = [&](std::string name, std::string class_name, double tol) {
      Entry e;
      e.name = name;
      e.tolerance = tol;
      e.whole = [name, class_name, tol](FrameSampler& sampler, const IdentityOptions& opts) {
        return run_table(sampler, name, class_name, tol, opts);
      };
      r.push_back(std::move(e));
    };
    add_table("table-2", "FP-Berwald", 1e-7);
    add_table("table-3", "FP-Minkowskian", 1e-7);
    add_table("table-4", "FP-Riemannian", 1e-7);

    return r;
  }();
  return entries;
}

const Entry* find_entry(const std::string& name) {
  for (const Entry& e : registry()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

}  // namespace

std::vector<std::string> identity_names() {
  std::vector<std::string> names;
  for (const Entry& e : registry()) names.push_back(e.name);
  return names;
}

bool identity_known(const std::string& name) { return find_entry(name) != nullptr; }

IdentityResidual identity_check(FrameSampler& sampler, const std::string& name,
                                const IdentityOptions& options) {
  const Entry* entry = find_entry(name);
  if (!entry) throw Error("unknown identity name: " + name);

  if (entry->whole) return entry->whole(sampler, options);

  IdentityResidual out;
  out.name = entry->name;
  out.tolerance = options.tolerance.value_or(entry->tolerance);
  out.samples = static_cast<long>(sampler.size());

  if (entry->needs_finsler && !sampler.validation().finsler_valid) {
    out.pass = true;
    out.skipped_reason = "hypothesis not met: frame is not Finsler-valid at the samples";
    return out;
  }

  ResidualAccumulator acc;
  for (std::size_t i = 0; i < sampler.size(); ++i) {
    entry->per_sample(acc, sampler, i);
  }
  out.residual = entry->scale_relative ? acc.relative() : acc.raw();
  out.signed_residual = acc.signed_max();
  out.pass = out.residual <= out.tolerance;
  return out;
}

IdentityResidual identity_check(const Frame& frame, const std::string& name,
                                std::span<const EvalPoint> samples,
                                const IdentityOptions& options) {
  FrameSampler sampler(frame, std::vector<EvalPoint>(samples.begin(), samples.end()));
  return identity_check(sampler, name, options);
}

std::vector<IdentityResidual> run_identities(FrameSampler& sampler,
                                             const std::vector<std::string>& filter,
                                             const IdentityOptions& options) {
  std::vector<IdentityResidual> results;
  if (filter.empty()) {
    for (const Entry& e : registry()) {
      results.push_back(identity_check(sampler, e.name, options));
    }
  } else {
    for (const std::string& name : filter) {
      results.push_back(identity_check(sampler, name, options));
    }
  }
  return results;
}

}  // namespace fp
