#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fp/errors.hpp"
#include "fp/eval_point.hpp"
#include "fp/multi_index.hpp"

namespace fp {

/// Shared immutable description of a truncated polynomial algebra: the
/// monomial basis over n_vars variables up to a total degree, plus the
/// lookup tables used by jet arithmetic. Instances are memoized, so all
/// jets built for the same (n_vars, order) share one space and can be
/// combined freely.
class JetSpace {
 public:
  static std::shared_ptr<const JetSpace> get(int n_vars, int order);

  int n_vars() const noexcept { return n_vars_; }
  int order() const noexcept { return order_; }
  /// Number of monomials of total degree <= order.
  int size() const noexcept { return static_cast<int>(basis_.size()); }

  const MultiIndex& basis(int k) const { return basis_[static_cast<std::size_t>(k)]; }
  int degree(int k) const { return degree_[static_cast<std::size_t>(k)]; }

  /// Position of a multi-index in the basis, or -1 when its degree exceeds
  /// the order.
  int index_of(const MultiIndex& idx) const;

  /// Position of basis(i) + basis(j), or -1 on degree overflow.
  int product_index(int i, int j) const {
    return prod_[static_cast<std::size_t>(i) * basis_.size() + static_cast<std::size_t>(j)];
  }

  /// Position of basis(k) + e_var, or -1 on degree overflow.
  int shift_index(int k, int var) const {
    return shift_[static_cast<std::size_t>(k) * static_cast<std::size_t>(n_vars_) +
                  static_cast<std::size_t>(var)];
  }

 private:
  JetSpace(int n_vars, int order);

  int n_vars_;
  int order_;
  std::vector<MultiIndex> basis_;
  std::vector<int> degree_;
  std::vector<int> prod_;
  std::vector<int> shift_;
  std::vector<std::uint64_t> keys_;  // pack() of each basis entry, sorted lookup
  std::vector<int> key_order_;
};

using JetSpacePtr = std::shared_ptr<const JetSpace>;

/// A truncated multivariate Taylor expansion of a scalar field around an
/// (implicit) expansion point. Coefficients are plain Taylor coefficients;
/// partial() applies the factorial normalization so the returned value is
/// the actual partial derivative.
///
/// Every jet carries its own validity order: arithmetic takes the minimum
/// of the operand orders and derivative() lowers it by one, so coefficients
/// above the validity order are never trusted.
class Jet {
 public:
  Jet() = default;

  static Jet constant(JetSpacePtr space, double value, int order);
  /// Coordinate seed: value plus unit first derivative in its own variable.
  static Jet variable(JetSpacePtr space, int var, double value, int order);

  bool valid() const noexcept { return space_ != nullptr; }
  const JetSpacePtr& space() const noexcept { return space_; }
  int order() const noexcept { return order_; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }

  /// Raw Taylor coefficient for a basis multi-index.
  double coefficient(const MultiIndex& idx) const;
  /// Largest |coefficient| over the trusted degrees; bounds the magnitude
  /// of the derivatives the jet carries.
  double max_abs_coefficient() const;
  /// Partial derivative (factorial-normalized Taylor coefficient). Throws
  /// when the total degree of idx exceeds the validity order.
  double partial(const MultiIndex& idx) const;

  /// Jet of the first partial derivative with respect to one variable;
  /// validity order drops by one.
  Jet derivative(int var) const;

  /// Composes this jet with jets of the same variable count living in a
  /// possibly different space. The values of args must be the coordinates
  /// of the expansion point this jet was built around.
  Jet substitute(std::span<const Jet> args) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator+=(double rhs);
  Jet& operator-=(double rhs);
  Jet& operator*=(double rhs);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, const Jet& b) { return -b + a; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a *= (1.0 / b); }

  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(double a, const Jet& b);

  friend Jet sqrt(const Jet& u);
  friend Jet exp(const Jet& u);
  friend Jet log(const Jet& u);
  friend Jet sin(const Jet& u);
  friend Jet cos(const Jet& u);
  friend Jet abs(const Jet& u);
  friend Jet pow(const Jet& u, long long k);
  friend Jet pow(const Jet& u, double p);
  friend Jet pow(const Jet& u, const Jet& v);
  friend Jet inverse(const Jet& u);

  /// Exact equality of validity order and all trusted coefficients.
  friend bool identical(const Jet& a, const Jet& b);
  /// Largest absolute difference between trusted coefficients (orders must
  /// match for a meaningful comparison; compares up to the smaller order).
  friend double max_coefficient_difference(const Jet& a, const Jet& b);

 private:
  Jet(JetSpacePtr space, int order);

  void check_same_space(const Jet& other) const;

  JetSpacePtr space_;
  int order_ = 0;
  std::vector<double> c_;
};

/// Seed jets for all 2n chart variables at a point, each with the
/// coordinate as value and a unit first derivative in its own variable.
/// Rejects orders above the configured cap (see max_jet_order()).
std::vector<Jet> jet_lift(const EvalPoint& point, int order);

/// Partial derivative of a jet-valued field; thin wrapper kept for symmetry
/// with the finite-difference oracle.
double jet_extract(const Jet& jet, const MultiIndex& idx);

/// Maximum jet order accepted by jet_lift. Defaults to 4; the environment
/// variable FP_TENSOR_MAX_ORDER overrides it (read once per process).
int max_jet_order();

}  // namespace fp
