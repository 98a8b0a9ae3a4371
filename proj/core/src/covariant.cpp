#include "fp/covariant.hpp"

namespace fp {

namespace {

std::size_t pow_n(int n, int rank) {
  std::size_t s = 1;
  for (int i = 0; i < rank; ++i) s *= static_cast<std::size_t>(n);
  return s;
}

void unflatten(std::size_t flat, int n, int rank, int* idx) {
  for (int s = rank - 1; s >= 0; --s) {
    idx[s] = static_cast<int>(flat % static_cast<std::size_t>(n));
    flat /= static_cast<std::size_t>(n);
  }
}

std::size_t flatten(const int* idx, int n, int rank) {
  std::size_t off = 0;
  for (int s = 0; s < rank; ++s) {
    off = off * static_cast<std::size_t>(n) + static_cast<std::size_t>(idx[s]);
  }
  return off;
}

JetGrid covariant_impl(const GeometryContext& ctx, ConnectionKind kind,
                       const JetGrid& x, bool horizontal) {
  const int n = ctx.n();
  if (x.n() != n && x.rank() > 0) throw Error("covariant: dimension mismatch");
  const JetConnection& conn = ctx.connection(kind);
  const JetGrid& coeff = horizontal ? conn.F : conn.C;

  std::vector<Variance> out_var = x.variances();
  out_var.push_back(Variance::Lower);
  JetGrid out(n, out_var);

  const int rank = x.rank();
  const std::size_t count = pow_n(n, rank);
  std::vector<int> idx(static_cast<std::size_t>(rank) + 1, 0);

  for (std::size_t flat = 0; flat < count; ++flat) {
    if (rank > 0) unflatten(flat, n, rank, idx.data());
    const Jet& base = x.flat()[flat];
    for (int nu = 0; nu < n; ++nu) {
      Jet d = horizontal ? ctx.delta(base, nu) : ctx.dy(base, nu);
      for (int slot = 0; slot < rank; ++slot) {
        const Variance v = x.variances()[static_cast<std::size_t>(slot)];
        if (v == Variance::Mesh) continue;
        const int held = idx[static_cast<std::size_t>(slot)];
        for (int eta = 0; eta < n; ++eta) {
          std::vector<int> j(idx.begin(), idx.begin() + rank);
          j[static_cast<std::size_t>(slot)] = eta;
          const Jet& swapped = x.flat()[flatten(j.data(), n, rank)];
          if (v == Variance::Upper) {
            d += swapped * coeff.at(held, eta, nu);
          } else {
            d -= swapped * coeff.at(eta, held, nu);
          }
        }
      }
      idx[static_cast<std::size_t>(rank)] = nu;
      out.flat()[flatten(idx.data(), n, rank + 1)] = std::move(d);
    }
  }
  return out;
}

}  // namespace

JetGrid h_covariant(const GeometryContext& ctx, ConnectionKind kind, const JetGrid& x) {
  return covariant_impl(ctx, kind, x, true);
}

JetGrid v_covariant(const GeometryContext& ctx, ConnectionKind kind, const JetGrid& x) {
  return covariant_impl(ctx, kind, x, false);
}

Tensor h_covariant(const TensorField& field, ConnectionKind kind, const GeometryContext& ctx) {
  return values_of(h_covariant(ctx, kind, field.eval(ctx)));
}

Tensor v_covariant(const TensorField& field, ConnectionKind kind, const GeometryContext& ctx) {
  return values_of(v_covariant(ctx, kind, field.eval(ctx)));
}

CoframeDerivatives miron_covariant_of_coframe(const GeometryContext& ctx) {
  const JetGrid& cf = ctx.coframe();
  return CoframeDerivatives{
      h_covariant(ctx, ConnectionKind::CartanMiron, cf),
      v_covariant(ctx, ConnectionKind::CartanMiron, cf),
  };
}

}  // namespace fp
