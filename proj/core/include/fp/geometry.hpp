#pragma once

#include <array>
#include <optional>
#include <string>

#include "fp/frame.hpp"
#include "fp/tensor.hpp"

namespace fp {

/// The four connection triples of the theory. All of them share the Barthel
/// nonlinear connection derived from the canonical spray.
enum class ConnectionKind { CartanMiron, Canonical, Dual, Berwald };

constexpr std::array<ConnectionKind, 4> kAllConnectionKinds = {
    ConnectionKind::CartanMiron, ConnectionKind::Canonical,
    ConnectionKind::Dual, ConnectionKind::Berwald};

std::string to_string(ConnectionKind kind);
std::optional<ConnectionKind> connection_kind_from_string(const std::string& name);

/// Jets of one connection triple (F, N, C): horizontal coefficients
/// F[alpha][mu][nu], the nonlinear connection N[alpha][mu], and vertical
/// coefficients C[alpha][mu][nu].
struct JetConnection {
  ConnectionKind kind;
  JetGrid F;
  JetGrid N;
  JetGrid C;
};

/// Value-level snapshot of a triple for reporting.
struct ConnectionTriple {
  ConnectionKind kind;
  Tensor F;
  Tensor N;
  Tensor C;
};

/// Contortion pair: difference between the canonical and Cartan (Miron)
/// coefficients, horizontal and vertical.
struct ContortionPair {
  Tensor A;
  Tensor B;
};

/// Per-point evaluation cache: jets of the frame, coframe, metric, spray,
/// Barthel connection and the four connection triples, computed lazily and
/// exactly (all derivatives flow through jet arithmetic). One context per
/// point; contexts are independent and may be used from different threads,
/// but a single instance is not internally synchronized.
class GeometryContext {
 public:
  GeometryContext(const Frame& frame, const EvalPoint& point, int order = 4);
  /// Builds a context from externally supplied frame jets (chart-transformed
  /// frames take this route). The grid must be [i][alpha] with jet seeds of
  /// the 2n chart variables around `point`.
  GeometryContext(JetGrid lambda, EvalPoint point);

  int n() const noexcept { return n_; }
  int order() const noexcept { return order_; }
  const EvalPoint& point() const noexcept { return point_; }

  /// Coordinate seed jets (x then y).
  const std::vector<Jet>& seeds() const noexcept { return seeds_; }
  const Jet& y_seed(int mu) const { return seeds_.at(static_cast<std::size_t>(n_ + mu)); }

  const JetGrid& lambda() const noexcept { return lambda_; }
  double lambda_determinant() const noexcept { return det_; }

  const JetGrid& coframe() const;      // [i][mu], lower world index
  const JetGrid& metric() const;       // g_mu_nu
  const JetGrid& metric_inverse() const;
  const Jet& lagrangian() const;       // L = F^2 as a jet field
  const JetGrid& cartan_tensor() const;        // C_beta_mu_nu, all lower
  const JetGrid& formal_christoffel() const;   // gamma^alpha_mu_nu
  const JetGrid& spray() const;                // G^alpha
  const JetGrid& barthel() const;              // N^alpha_mu
  const JetGrid& berwald_coefficients() const; // G^alpha_mu_nu

  /// Horizontal base derivative adapted to the Barthel connection:
  /// delta_mu f = d_mu f - N^alpha_mu dy_alpha f.
  Jet delta(const Jet& f, int mu) const;

  /// Plain partial-derivative helpers over the chart variables.
  Jet dx(const Jet& f, int mu) const { return f.derivative(mu); }
  Jet dy(const Jet& f, int mu) const { return f.derivative(n_ + mu); }

  const JetConnection& connection(ConnectionKind kind) const;
  const JetGrid& contortion_h() const;  // A = Gamma - Gamma_miron
  const JetGrid& contortion_v() const;  // B = C - C_miron

  /// Value-level snapshot of a triple.
  ConnectionTriple triple_values(ConnectionKind kind) const;
  ContortionPair contortion_values() const;

 private:
  void init(JetGrid lambda);
  JetGrid christoffel_like(bool vertical) const;

  int n_ = 0;
  int order_ = 0;
  EvalPoint point_{{0, 0}, {1, 0}};
  std::vector<Jet> seeds_;
  JetGrid lambda_;
  double det_ = 0.0;

  mutable std::optional<JetGrid> coframe_;
  mutable std::optional<JetGrid> metric_;
  mutable std::optional<JetGrid> metric_inv_;
  mutable std::optional<Jet> lagrangian_;
  mutable std::optional<JetGrid> cartan_;
  mutable std::optional<JetGrid> gamma_;
  mutable std::optional<JetGrid> spray_;
  mutable std::optional<JetGrid> barthel_;
  mutable std::optional<JetGrid> berwald_;
  mutable std::array<std::optional<JetConnection>, 4> triples_;
  mutable std::optional<JetGrid> contortion_h_;
  mutable std::optional<JetGrid> contortion_v_;
};

/// Jet-valued matrix inverse by Gaussian elimination with partial pivoting
/// on the values. Throws SingularError when a pivot value vanishes.
JetGrid invert_jet_matrix(const JetGrid& m);

/// Determinant of the value part of a rank-2 grid.
double value_determinant(const JetGrid& m);

// Point-level convenience wrappers over a one-shot context.
Tensor cartan_tensor(const Frame& frame, const EvalPoint& point);
Tensor formal_christoffel(const Frame& frame, const EvalPoint& point);
Tensor spray(const Frame& frame, const EvalPoint& point);
Tensor barthel(const Frame& frame, const EvalPoint& point);
Tensor berwald_coefficients(const Frame& frame, const EvalPoint& point);
ConnectionTriple connection(const Frame& frame, ConnectionKind kind, const EvalPoint& point);
ContortionPair contortion(const Frame& frame, const EvalPoint& point);

}  // namespace fp
