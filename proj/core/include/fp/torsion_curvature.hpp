#pragma once

#include "fp/covariant.hpp"
#include "fp/geometry.hpp"

namespace fp {

/// The five torsion tensors of a connection triple. All grids are
/// [alpha][mu][nu] with an upper first index.
struct TorsionSet {
  ConnectionKind kind;
  JetGrid hh;    // T:  F^a_mn - F^a_nm
  JetGrid hhv;   // C:  the vertical coefficients themselves
  JetGrid vh;    // R:  delta_n N^a_m - delta_m N^a_n
  JetGrid vhv;   // P:  dy_n N^a_m - F^a_mn
  JetGrid vv;    // S:  C^a_mn - C^a_nm
};

TorsionSet torsions(const GeometryContext& ctx, ConnectionKind kind);

/// The three curvature tensors of a connection triple, [alpha][mu][nu][sigma].
struct CurvatureSet {
  ConnectionKind kind;
  JetGrid h;   // R: alternation of delta F + F F, plus C-coupled vh-torsion
  JetGrid hv;  // P: dy F - C|_ (h-covariant) + C-coupled vhv-torsion
  JetGrid v;   // S: alternation of dy C + C C
};

CurvatureSet curvatures(const GeometryContext& ctx, ConnectionKind kind);

}  // namespace fp
