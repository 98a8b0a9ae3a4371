#pragma once

#include <functional>

#include "fp/geometry.hpp"

namespace fp {

/// Horizontal covariant derivative of a jet tensor of arbitrary valence
/// with respect to one of the connection triples:
///
///   X|nu = delta_nu X  + sum over upper slots  X(eta at slot) F^slot_eta_nu
///                      - sum over lower slots  X(eta at slot) F^eta_slot_nu
///
/// Mesh slots are inert. The derivative index is appended as a new trailing
/// lower index.
JetGrid h_covariant(const GeometryContext& ctx, ConnectionKind kind, const JetGrid& x);

/// Vertical counterpart: the plain y-derivative with the C coefficients.
JetGrid v_covariant(const GeometryContext& ctx, ConnectionKind kind, const JetGrid& x);

/// A tensor field: fixed valence plus a rule producing its jets at any
/// evaluated point.
struct TensorField {
  std::vector<Variance> variances;
  std::function<JetGrid(const GeometryContext&)> eval;
};

Tensor h_covariant(const TensorField& field, ConnectionKind kind, const GeometryContext& ctx);
Tensor v_covariant(const TensorField& field, ConnectionKind kind, const GeometryContext& ctx);

/// Covariant derivatives of the coframe with respect to the Cartan (Miron)
/// connection; the horizontal one reproduces the h-contortion when
/// contracted with the frame.
struct CoframeDerivatives {
  JetGrid horizontal;  // [i][mu][nu]
  JetGrid vertical;    // [i][mu][nu]
};

CoframeDerivatives miron_covariant_of_coframe(const GeometryContext& ctx);

}  // namespace fp
