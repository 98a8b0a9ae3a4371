#include "fp/torsion_curvature.hpp"

namespace fp {

TorsionSet torsions(const GeometryContext& ctx, ConnectionKind kind) {
  const int n = ctx.n();
  const JetConnection& conn = ctx.connection(kind);
  const std::vector<Variance> ull = {Variance::Upper, Variance::Lower, Variance::Lower};

  TorsionSet out{kind, JetGrid(n, ull), conn.C, JetGrid(n, ull), JetGrid(n, ull), JetGrid(n, ull)};

  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        out.hh.at(a, mu, nu) = conn.F.at(a, mu, nu) - conn.F.at(a, nu, mu);
        out.vh.at(a, mu, nu) = ctx.delta(conn.N.at(a, mu), nu) - ctx.delta(conn.N.at(a, nu), mu);
        out.vhv.at(a, mu, nu) = ctx.dy(conn.N.at(a, mu), nu) - conn.F.at(a, mu, nu);
        out.vv.at(a, mu, nu) = conn.C.at(a, mu, nu) - conn.C.at(a, nu, mu);
      }
    }
  }
  return out;
}

CurvatureSet curvatures(const GeometryContext& ctx, ConnectionKind kind) {
  const int n = ctx.n();
  const JetConnection& conn = ctx.connection(kind);
  const TorsionSet tors = torsions(ctx, kind);

  // All three tensors follow one attachment pattern: the inner factor of a
  // quadratic term carries nu, the outer carries sigma. In the hv-tensor the
  // covariant correction for the trailing slot of C attaches the derivative
  // index first; for symmetric connections this coincides with the usual
  // h-covariant derivative, and it is the form under which the canonical
  // connection is exactly flat.
  const std::vector<Variance> ulll = {Variance::Upper, Variance::Lower, Variance::Lower,
                                      Variance::Lower};
  CurvatureSet out{kind, JetGrid(n, ulll), JetGrid(n, ulll), JetGrid(n, ulll)};

  for (int a = 0; a < n; ++a) {
    for (int mu = 0; mu < n; ++mu) {
      for (int nu = 0; nu < n; ++nu) {
        for (int sg = 0; sg < n; ++sg) {
          // h-curvature: U_(nu,sigma){delta_sigma F^a_mn + F^e_mn F^a_es}
          //              + C^a_me R^e_ns
          Jet r = ctx.delta(conn.F.at(a, mu, nu), sg) - ctx.delta(conn.F.at(a, mu, sg), nu);
          for (int e = 0; e < n; ++e) {
            r += conn.F.at(e, mu, nu) * conn.F.at(a, e, sg);
            r -= conn.F.at(e, mu, sg) * conn.F.at(a, e, nu);
            r += conn.C.at(a, mu, e) * tors.vh.at(e, nu, sg);
          }
          out.h.at(a, mu, nu, sg) = std::move(r);

          // hv-curvature: dy_sigma F^a_mn - C^a_ms|n + C^a_me P^e_ns, with
          // the trailing attachment of the C-derivative reading F^e_ns.
          Jet ccov = ctx.delta(conn.C.at(a, mu, sg), nu);
          for (int e = 0; e < n; ++e) {
            ccov += conn.C.at(e, mu, sg) * conn.F.at(a, e, nu);
            ccov -= conn.C.at(a, e, sg) * conn.F.at(e, mu, nu);
            ccov -= conn.C.at(a, mu, e) * conn.F.at(e, nu, sg);
          }
          Jet p = ctx.dy(conn.F.at(a, mu, nu), sg) - ccov;
          for (int e = 0; e < n; ++e) {
            p += conn.C.at(a, mu, e) * tors.vhv.at(e, nu, sg);
          }
          out.hv.at(a, mu, nu, sg) = std::move(p);

          // v-curvature: U_(nu,sigma){dy_sigma C^a_mn + C^e_mn C^a_es}
          Jet s = ctx.dy(conn.C.at(a, mu, nu), sg) - ctx.dy(conn.C.at(a, mu, sg), nu);
          for (int e = 0; e < n; ++e) {
            s += conn.C.at(e, mu, nu) * conn.C.at(a, e, sg);
            s -= conn.C.at(e, mu, sg) * conn.C.at(a, e, nu);
          }
          out.v.at(a, mu, nu, sg) = std::move(s);
        }
      }
    }
  }
  return out;
}

}  // namespace fp
