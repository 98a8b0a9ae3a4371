#include "fp/geometry.hpp"

#include <cmath>
#include <sstream>

namespace fp {

std::string to_string(ConnectionKind kind) {
  switch (kind) {
    case ConnectionKind::CartanMiron: return "cartan";
    case ConnectionKind::Canonical: return "canonical";
    case ConnectionKind::Dual: return "dual";
    case ConnectionKind::Berwald: return "berwald";
  }
  return "?";
}

std::optional<ConnectionKind> connection_kind_from_string(const std::string& name) {
  if (name == "cartan" || name == "miron" || name == "cartan-miron") {
    return ConnectionKind::CartanMiron;
  }
  if (name == "canonical") return ConnectionKind::Canonical;
  if (name == "dual") return ConnectionKind::Dual;
  if (name == "berwald") return ConnectionKind::Berwald;
  return std::nullopt;
}

namespace {

std::string point_to_string(const EvalPoint& p) {
  std::ostringstream os;
  os << "x=(";
  for (int i = 0; i < p.dim(); ++i) os << (i ? "," : "") << p.x()[static_cast<std::size_t>(i)];
  os << "), y=(";
  for (int i = 0; i < p.dim(); ++i) os << (i ? "," : "") << p.y()[static_cast<std::size_t>(i)];
  os << ")";
  return os.str();
}

}  // namespace

double value_determinant(const JetGrid& m) {
  const int n = m.n();
  std::vector<double> a(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(i * n + j)] = m.at(i, j).value();
    }
  }
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(a[static_cast<std::size_t>(r * n + col)]) >
          std::fabs(a[static_cast<std::size_t>(pivot * n + col)])) {
        pivot = r;
      }
    }
    if (a[static_cast<std::size_t>(pivot * n + col)] == 0.0) return 0.0;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a[static_cast<std::size_t>(col * n + c)], a[static_cast<std::size_t>(pivot * n + c)]);
      }
      det = -det;
    }
    det *= a[static_cast<std::size_t>(col * n + col)];
    for (int r = col + 1; r < n; ++r) {
      const double f = a[static_cast<std::size_t>(r * n + col)] / a[static_cast<std::size_t>(col * n + col)];
      for (int c = col; c < n; ++c) {
        a[static_cast<std::size_t>(r * n + c)] -= f * a[static_cast<std::size_t>(col * n + c)];
      }
    }
  }
  return det;
}

JetGrid invert_jet_matrix(const JetGrid& m) {
  const int n = m.n();
  if (m.rank() != 2) throw Error("invert_jet_matrix: rank-2 grid required");

  // Augmented elimination [A | I] in jet arithmetic, pivoting on values.
  std::vector<std::vector<Jet>> a(static_cast<std::size_t>(n));
  std::vector<std::vector<Jet>> inv(static_cast<std::size_t>(n));
  const auto space = m.at(0, 0).space();
  const int order = m.at(0, 0).order();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(i)].push_back(m.at(i, j));
      inv[static_cast<std::size_t>(i)].push_back(
          Jet::constant(space, i == j ? 1.0 : 0.0, order));
    }
  }

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)].value()) >
          std::fabs(a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)].value())) {
        pivot = r;
      }
    }
    if (a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)].value() == 0.0) {
      throw SingularError("matrix of jets is singular");
    }
    std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
    std::swap(inv[static_cast<std::size_t>(col)], inv[static_cast<std::size_t>(pivot)]);

    const Jet scale = inverse(a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)]);
    for (int c = 0; c < n; ++c) {
      a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)] =
          a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)] * scale;
      inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)] =
          inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)] * scale;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      for (int c = 0; c < n; ++c) {
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
        inv[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            f * inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
      }
    }
  }

  JetGrid out(n, {Variance::Lower, Variance::Lower});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out.at(i, j) = inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// GeometryContext
// ---------------------------------------------------------------------------

GeometryContext::GeometryContext(const Frame& frame, const EvalPoint& point, int order)
    : point_(point) {
  if (frame.n() != point.dim()) {
    throw Error("GeometryContext: frame and point dimensions differ");
  }
  init(frame.lambda_jets(point, order));
}

GeometryContext::GeometryContext(JetGrid lambda, EvalPoint point) : point_(std::move(point)) {
  init(std::move(lambda));
}

void GeometryContext::init(JetGrid lambda) {
  n_ = lambda.n();
  order_ = lambda.at(0, 0).order();
  lambda_ = std::move(lambda);
  det_ = value_determinant(lambda_);
  if (std::fabs(det_) <= 1e-10) {
    throw SingularError("singular frame at point " + point_to_string(point_) +
                        " (|det| = " + std::to_string(std::fabs(det_)) + ")");
  }
  const auto space = lambda_.at(0, 0).space();
  seeds_.reserve(static_cast<std::size_t>(2 * n_));
  for (int v = 0; v < 2 * n_; ++v) {
    seeds_.push_back(Jet::variable(space, v, point_.coord(v), order_));
  }
}

const JetGrid& GeometryContext::coframe() const {
  if (!coframe_) {
    const JetGrid inv = invert_jet_matrix(lambda_);
    JetGrid cf(n_, {Variance::Mesh, Variance::Lower});
    for (int i = 0; i < n_; ++i) {
      for (int mu = 0; mu < n_; ++mu) {
        cf.at(i, mu) = inv.at(mu, i);
      }
    }
    coframe_ = std::move(cf);
  }
  return *coframe_;
}

const JetGrid& GeometryContext::metric() const {
  if (!metric_) {
    const JetGrid& cf = coframe();
    JetGrid g(n_, {Variance::Lower, Variance::Lower});
    for (int mu = 0; mu < n_; ++mu) {
      for (int nu = mu; nu < n_; ++nu) {
        Jet sum = cf.at(0, mu) * cf.at(0, nu);
        for (int i = 1; i < n_; ++i) sum += cf.at(i, mu) * cf.at(i, nu);
        g.at(mu, nu) = sum;
        if (nu != mu) g.at(nu, mu) = sum;
      }
    }
    metric_ = std::move(g);
  }
  return *metric_;
}

const JetGrid& GeometryContext::metric_inverse() const {
  if (!metric_inv_) {
    JetGrid g(n_, {Variance::Upper, Variance::Upper});
    for (int mu = 0; mu < n_; ++mu) {
      for (int nu = mu; nu < n_; ++nu) {
        Jet sum = lambda_.at(0, mu) * lambda_.at(0, nu);
        for (int i = 1; i < n_; ++i) sum += lambda_.at(i, mu) * lambda_.at(i, nu);
        g.at(mu, nu) = sum;
        if (nu != mu) g.at(nu, mu) = sum;
      }
    }
    metric_inv_ = std::move(g);
  }
  return *metric_inv_;
}

const Jet& GeometryContext::lagrangian() const {
  if (!lagrangian_) {
    const JetGrid& g = metric();
    Jet sum = Jet::constant(seeds_[0].space(), 0.0, order_);
    for (int mu = 0; mu < n_; ++mu) {
      for (int nu = 0; nu < n_; ++nu) {
        sum += g.at(mu, nu) * y_seed(mu) * y_seed(nu);
      }
    }
    lagrangian_ = std::move(sum);
  }
  return *lagrangian_;
}

const JetGrid& GeometryContext::cartan_tensor() const {
  if (!cartan_) {
    const JetGrid& g = metric();
    JetGrid c(n_, {Variance::Lower, Variance::Lower, Variance::Lower});
    for (int beta = 0; beta < n_; ++beta) {
      for (int mu = 0; mu < n_; ++mu) {
        for (int nu = 0; nu < n_; ++nu) {
          c.at(beta, mu, nu) = dy(g.at(mu, nu), beta) * 0.5;
        }
      }
    }
    cartan_ = std::move(c);
  }
  return *cartan_;
}

JetGrid GeometryContext::christoffel_like(bool vertical) const {
  // gamma^a_mn = (1/2) g^{ae} (D_m g_ne + D_n g_me - D_e g_mn) with D the
  // plain x-derivative, the y-derivative, or the delta-derivative.
  const JetGrid& g = metric();
  const JetGrid& ginv = metric_inverse();
  JetGrid out(n_, {Variance::Upper, Variance::Lower, Variance::Lower});

  // Precompute D_a g_mn.
  std::vector<Jet> dg(static_cast<std::size_t>(n_ * n_ * n_));
  auto dgi = [&](int a, int m, int nn) -> Jet& {
    return dg[static_cast<std::size_t>((a * n_ + m) * n_ + nn)];
  };
  for (int a = 0; a < n_; ++a) {
    for (int m = 0; m < n_; ++m) {
      for (int nn = 0; nn < n_; ++nn) {
        dgi(a, m, nn) = vertical ? dy(g.at(m, nn), a) : dx(g.at(m, nn), a);
      }
    }
  }

  for (int alpha = 0; alpha < n_; ++alpha) {
    for (int mu = 0; mu < n_; ++mu) {
      for (int nu = 0; nu < n_; ++nu) {
        Jet sum = ginv.at(alpha, 0) * (dgi(mu, nu, 0) + dgi(nu, mu, 0) - dgi(0, mu, nu));
        for (int eta = 1; eta < n_; ++eta) {
          sum += ginv.at(alpha, eta) *
                 (dgi(mu, nu, eta) + dgi(nu, mu, eta) - dgi(eta, mu, nu));
        }
        out.at(alpha, mu, nu) = sum * 0.5;
      }
    }
  }
  return out;
}

const JetGrid& GeometryContext::formal_christoffel() const {
  if (!gamma_) gamma_ = christoffel_like(false);
  return *gamma_;
}

const JetGrid& GeometryContext::spray() const {
  if (!spray_) {
    const JetGrid& gamma = formal_christoffel();
    JetGrid g(n_, {Variance::Upper});
    for (int alpha = 0; alpha < n_; ++alpha) {
      Jet sum = Jet::constant(seeds_[0].space(), 0.0, gamma.at(0, 0, 0).order());
      for (int mu = 0; mu < n_; ++mu) {
        for (int nu = 0; nu < n_; ++nu) {
          sum += gamma.at(alpha, mu, nu) * y_seed(mu) * y_seed(nu);
        }
      }
      g.at(alpha) = sum * 0.5;
    }
    spray_ = std::move(g);
  }
  return *spray_;
}

const JetGrid& GeometryContext::barthel() const {
  if (!barthel_) {
    const JetGrid& g = spray();
    JetGrid nconn(n_, {Variance::Upper, Variance::Lower});
    for (int alpha = 0; alpha < n_; ++alpha) {
      for (int beta = 0; beta < n_; ++beta) {
        nconn.at(alpha, beta) = dy(g.at(alpha), beta);
      }
    }
    barthel_ = std::move(nconn);
  }
  return *barthel_;
}

const JetGrid& GeometryContext::berwald_coefficients() const {
  if (!berwald_) {
    const JetGrid& nconn = barthel();
    JetGrid g(n_, {Variance::Upper, Variance::Lower, Variance::Lower});
    for (int alpha = 0; alpha < n_; ++alpha) {
      for (int sigma = 0; sigma < n_; ++sigma) {
        for (int beta = 0; beta < n_; ++beta) {
          g.at(alpha, sigma, beta) = dy(nconn.at(alpha, sigma), beta);
        }
      }
    }
    berwald_ = std::move(g);
  }
  return *berwald_;
}

Jet GeometryContext::delta(const Jet& f, int mu) const {
  const JetGrid& nconn = barthel();
  Jet out = dx(f, mu);
  for (int alpha = 0; alpha < n_; ++alpha) {
    out -= nconn.at(alpha, mu) * dy(f, alpha);
  }
  return out;
}

const JetConnection& GeometryContext::connection(ConnectionKind kind) const {
  auto& slot = triples_[static_cast<std::size_t>(kind)];
  if (slot) return *slot;

  JetConnection conn;
  conn.kind = kind;
  conn.N = barthel();

  switch (kind) {
    case ConnectionKind::CartanMiron: {
      // Generalized Christoffel symbols of g under delta, plus the vertical
      // Christoffel symbols.
      const JetGrid& g = metric();
      const JetGrid& ginv = metric_inverse();
      JetGrid F(n_, {Variance::Upper, Variance::Lower, Variance::Lower});
      std::vector<Jet> dg(static_cast<std::size_t>(n_ * n_ * n_));
      auto dgi = [&](int a, int m, int nn) -> Jet& {
        return dg[static_cast<std::size_t>((a * n_ + m) * n_ + nn)];
      };
      for (int a = 0; a < n_; ++a) {
        for (int m = 0; m < n_; ++m) {
          for (int nn = 0; nn < n_; ++nn) dgi(a, m, nn) = delta(g.at(m, nn), a);
        }
      }
      for (int alpha = 0; alpha < n_; ++alpha) {
        for (int mu = 0; mu < n_; ++mu) {
          for (int nu = 0; nu < n_; ++nu) {
            Jet sum = ginv.at(alpha, 0) * (dgi(mu, nu, 0) + dgi(nu, mu, 0) - dgi(0, mu, nu));
            for (int eta = 1; eta < n_; ++eta) {
              sum += ginv.at(alpha, eta) *
                     (dgi(mu, nu, eta) + dgi(nu, mu, eta) - dgi(eta, mu, nu));
            }
            F.at(alpha, mu, nu) = sum * 0.5;
          }
        }
      }
      conn.F = std::move(F);
      conn.C = christoffel_like(true);
      break;
    }
    case ConnectionKind::Canonical: {
      const JetGrid& cf = coframe();
      JetGrid F(n_, {Variance::Upper, Variance::Lower, Variance::Lower});
      JetGrid C(n_, {Variance::Upper, Variance::Lower, Variance::Lower});
      for (int alpha = 0; alpha < n_; ++alpha) {
        for (int mu = 0; mu < n_; ++mu) {
          for (int nu = 0; nu < n_; ++nu) {
            Jet fh = lambda_.at(0, alpha) * delta(cf.at(0, mu), nu);
            Jet fv = lambda_.at(0, alpha) * dy(cf.at(0, mu), nu);
            for (int i = 1; i < n_; ++i) {
              fh += lambda_.at(i, alpha) * delta(cf.at(i, mu), nu);
              fv += lambda_.at(i, alpha) * dy(cf.at(i, mu), nu);
            }
            F.at(alpha, mu, nu) = fh;
            C.at(alpha, mu, nu) = fv;
          }
        }
      }
      conn.F = std::move(F);
      conn.C = std::move(C);
      break;
    }
    case ConnectionKind::Dual: {
      const JetConnection& canonical = connection(ConnectionKind::Canonical);
      JetGrid F(n_, {Variance::Upper, Variance::Lower, Variance::Lower});
      JetGrid C(n_, {Variance::Upper, Variance::Lower, Variance::Lower});
      for (int alpha = 0; alpha < n_; ++alpha) {
        for (int mu = 0; mu < n_; ++mu) {
          for (int nu = 0; nu < n_; ++nu) {
            F.at(alpha, mu, nu) = canonical.F.at(alpha, nu, mu);
            C.at(alpha, mu, nu) = canonical.C.at(alpha, nu, mu);
          }
        }
      }
      conn.F = std::move(F);
      conn.C = std::move(C);
      break;
    }
    case ConnectionKind::Berwald: {
      conn.F = berwald_coefficients();
      JetGrid C(n_, {Variance::Upper, Variance::Lower, Variance::Lower});
      const auto space = seeds_[0].space();
      for (auto& j : C.flat()) j = Jet::constant(space, 0.0, order_);
      conn.C = std::move(C);
      break;
    }
  }

  slot = std::move(conn);
  return *slot;
}

const JetGrid& GeometryContext::contortion_h() const {
  if (!contortion_h_) {
    const JetConnection& canonical = connection(ConnectionKind::Canonical);
    const JetConnection& cartan = connection(ConnectionKind::CartanMiron);
    JetGrid a(n_, {Variance::Upper, Variance::Lower, Variance::Lower});
    for (std::size_t k = 0; k < a.flat().size(); ++k) {
      a.flat()[k] = canonical.F.flat()[k] - cartan.F.flat()[k];
    }
    contortion_h_ = std::move(a);
  }
  return *contortion_h_;
}

const JetGrid& GeometryContext::contortion_v() const {
  if (!contortion_v_) {
    const JetConnection& canonical = connection(ConnectionKind::Canonical);
    const JetConnection& cartan = connection(ConnectionKind::CartanMiron);
    JetGrid b(n_, {Variance::Upper, Variance::Lower, Variance::Lower});
    for (std::size_t k = 0; k < b.flat().size(); ++k) {
      b.flat()[k] = canonical.C.flat()[k] - cartan.C.flat()[k];
    }
    contortion_v_ = std::move(b);
  }
  return *contortion_v_;
}

ConnectionTriple GeometryContext::triple_values(ConnectionKind kind) const {
  const JetConnection& c = connection(kind);
  return ConnectionTriple{kind, values_of(c.F), values_of(c.N), values_of(c.C)};
}

ContortionPair GeometryContext::contortion_values() const {
  return ContortionPair{values_of(contortion_h()), values_of(contortion_v())};
}

Tensor cartan_tensor(const Frame& frame, const EvalPoint& point) {
  return values_of(GeometryContext(frame, point, 1).cartan_tensor());
}

Tensor formal_christoffel(const Frame& frame, const EvalPoint& point) {
  return values_of(GeometryContext(frame, point, 1).formal_christoffel());
}

Tensor spray(const Frame& frame, const EvalPoint& point) {
  return values_of(GeometryContext(frame, point, 1).spray());
}

Tensor barthel(const Frame& frame, const EvalPoint& point) {
  return values_of(GeometryContext(frame, point, 2).barthel());
}

Tensor berwald_coefficients(const Frame& frame, const EvalPoint& point) {
  return values_of(GeometryContext(frame, point, 3).berwald_coefficients());
}

ConnectionTriple connection(const Frame& frame, ConnectionKind kind, const EvalPoint& point) {
  return GeometryContext(frame, point, 4).triple_values(kind);
}

ContortionPair contortion(const Frame& frame, const EvalPoint& point) {
  return GeometryContext(frame, point, 4).contortion_values();
}

}  // namespace fp
