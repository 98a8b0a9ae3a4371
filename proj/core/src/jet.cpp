#include "fp/jet.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>

namespace fp {

JetSpace::JetSpace(int n_vars, int order) : n_vars_(n_vars), order_(order) {
  if (n_vars < 1 || n_vars > MultiIndex::kMaxVars) {
    throw Error("JetSpace: unsupported variable count");
  }
  if (order < 0 || order > MultiIndex::kMaxExponent) {
    throw Error("JetSpace: unsupported order");
  }

  // Enumerate all multi-indices with total degree <= order, sorted by
  // (degree, lexicographic) so that index 0 is the value slot.
  std::vector<MultiIndex> all;
  {
    MultiIndex idx(n_vars);
    const std::function<void(int, int)> descend = [&](int var, int budget) {
      if (var == n_vars) {
        all.push_back(idx);
        return;
      }
      for (int e = 0; e <= budget; ++e) {
        if (e > 0) idx.bump(var, 1);
        descend(var + 1, budget - e);
      }
      idx.bump(var, -idx[var]);
    };
    descend(0, order);
  }
  std::stable_sort(all.begin(), all.end(), [&](const MultiIndex& a, const MultiIndex& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = 0; i < n_vars; ++i) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  });
  basis_ = std::move(all);

  const std::size_t m = basis_.size();
  degree_.resize(m);
  keys_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    degree_[k] = basis_[k].degree();
    keys_[k] = basis_[k].pack();
  }
  key_order_.resize(m);
  for (std::size_t k = 0; k < m; ++k) key_order_[static_cast<std::size_t>(k)] = static_cast<int>(k);
  std::sort(key_order_.begin(), key_order_.end(),
            [&](int a, int b) { return keys_[static_cast<std::size_t>(a)] < keys_[static_cast<std::size_t>(b)]; });

  shift_.assign(m * static_cast<std::size_t>(n_vars), -1);
  prod_.assign(m * m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    for (int v = 0; v < n_vars; ++v) {
      if (degree_[i] + 1 <= order) {
        MultiIndex s = basis_[i];
        s.bump(v, 1);
        shift_[i * static_cast<std::size_t>(n_vars) + static_cast<std::size_t>(v)] = index_of(s);
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (degree_[i] + degree_[j] > order) continue;
      MultiIndex s = basis_[i];
      for (int v = 0; v < n_vars; ++v) s.bump(v, basis_[j][v]);
      prod_[i * m + j] = index_of(s);
    }
  }
}

int JetSpace::index_of(const MultiIndex& idx) const {
  if (idx.n_vars() != n_vars_ || idx.degree() > order_) return -1;
  const std::uint64_t key = idx.pack();
  auto it = std::lower_bound(key_order_.begin(), key_order_.end(), key,
                             [&](int k, std::uint64_t v) { return keys_[static_cast<std::size_t>(k)] < v; });
  if (it == key_order_.end() || keys_[static_cast<std::size_t>(*it)] != key) return -1;
  return *it;
}

std::shared_ptr<const JetSpace> JetSpace::get(int n_vars, int order) {
  static std::mutex mtx;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[{n_vars, order}];
  if (!slot) slot = std::shared_ptr<const JetSpace>(new JetSpace(n_vars, order));
  return slot;
}

// ---------------------------------------------------------------------------
// Jet
// ---------------------------------------------------------------------------

Jet::Jet(JetSpacePtr space, int order)
    : space_(std::move(space)), order_(order),
      c_(static_cast<std::size_t>(space_->size()), 0.0) {
  if (order_ < 0 || order_ > space_->order()) {
    throw Error("Jet: order outside the space truncation order");
  }
}

Jet Jet::constant(JetSpacePtr space, double value, int order) {
  Jet j(std::move(space), order);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(JetSpacePtr space, int var, double value, int order) {
  Jet j(std::move(space), order);
  j.c_[0] = value;
  if (order >= 1) {
    MultiIndex e(j.space_->n_vars());
    e.bump(var, 1);
    j.c_[static_cast<std::size_t>(j.space_->index_of(e))] = 1.0;
  }
  return j;
}

void Jet::check_same_space(const Jet& other) const {
  if (!space_ || !other.space_) throw Error("Jet: operation on an empty jet");
  if (space_ != other.space_) {
    throw Error("Jet: operands belong to different jet spaces");
  }
}

double Jet::coefficient(const MultiIndex& idx) const {
  if (!space_) throw Error("Jet: empty");
  const int k = space_->index_of(idx);
  if (k < 0 || space_->degree(k) > order_) {
    throw Error("Jet: multi-index degree exceeds the jet order");
  }
  return c_[static_cast<std::size_t>(k)];
}

double Jet::partial(const MultiIndex& idx) const {
  return coefficient(idx) * idx.factorial();
}

double Jet::max_abs_coefficient() const {
  if (!space_) return 0.0;
  double worst = 0.0;
  for (int k = 0; k < space_->size(); ++k) {
    if (space_->degree(k) > order_) continue;
    worst = std::max(worst, std::fabs(c_[static_cast<std::size_t>(k)]));
  }
  return worst;
}

Jet Jet::derivative(int var) const {
  if (!space_) throw Error("Jet: empty");
  if (order_ < 1) throw Error("Jet: derivative exceeds the jet order");
  if (var < 0 || var >= space_->n_vars()) throw Error("Jet: variable out of range");
  Jet out(space_, order_ - 1);
  const int m = space_->size();
  for (int k = 0; k < m; ++k) {
    if (space_->degree(k) > out.order_) continue;
    const int src = space_->shift_index(k, var);
    if (src < 0) continue;
    out.c_[static_cast<std::size_t>(k)] =
        c_[static_cast<std::size_t>(src)] * (space_->basis(k)[var] + 1);
  }
  return out;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& v : out.c_) v = -v;
  return out;
}

Jet& Jet::operator+=(const Jet& rhs) {
  check_same_space(rhs);
  order_ = std::min(order_, rhs.order_);
  const int m = space_->size();
  for (int k = 0; k < m; ++k) {
    if (space_->degree(k) > order_) {
      c_[static_cast<std::size_t>(k)] = 0.0;
    } else {
      c_[static_cast<std::size_t>(k)] += rhs.c_[static_cast<std::size_t>(k)];
    }
  }
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  check_same_space(rhs);
  order_ = std::min(order_, rhs.order_);
  const int m = space_->size();
  for (int k = 0; k < m; ++k) {
    if (space_->degree(k) > order_) {
      c_[static_cast<std::size_t>(k)] = 0.0;
    } else {
      c_[static_cast<std::size_t>(k)] -= rhs.c_[static_cast<std::size_t>(k)];
    }
  }
  return *this;
}

Jet& Jet::operator+=(double rhs) {
  if (!space_) throw Error("Jet: empty");
  c_[0] += rhs;
  return *this;
}

Jet& Jet::operator-=(double rhs) { return *this += -rhs; }

Jet& Jet::operator*=(double rhs) {
  if (!space_) throw Error("Jet: empty");
  for (auto& v : c_) v *= rhs;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.check_same_space(b);
  const auto& space = *a.space_;
  Jet out(a.space_, std::min(a.order_, b.order_));
  const int m = space.size();
  // Symmetric pair accumulation keeps the product bitwise commutative.
  for (int i = 0; i < m; ++i) {
    if (space.degree(i) > out.order_) continue;
    const double ai = a.c_[static_cast<std::size_t>(i)];
    const double bi = b.c_[static_cast<std::size_t>(i)];
    for (int j = i; j < m; ++j) {
      if (space.degree(i) + space.degree(j) > out.order_) continue;
      const double aj = a.c_[static_cast<std::size_t>(j)];
      const double bj = b.c_[static_cast<std::size_t>(j)];
      if ((ai == 0.0 || bj == 0.0) && (aj == 0.0 || bi == 0.0)) continue;
      const int k = space.product_index(i, j);
      const double term = (i == j) ? ai * bi : ai * bj + aj * bi;
      out.c_[static_cast<std::size_t>(k)] += term;
    }
  }
  return out;
}

namespace {

/// f(u) given the derivative sequence d[k] = f^(k)(value(u)), via the
/// truncated composition with the nilpotent part h = u - u0.
Jet compose_series(const Jet& u, std::span<const double> derivs) {
  Jet h = u;
  h -= u.value();
  Jet acc = Jet::constant(u.space(), derivs[0], u.order());
  Jet hp = Jet::constant(u.space(), 1.0, u.order());
  double fact = 1.0;
  for (int k = 1; k <= u.order() && k < static_cast<int>(derivs.size()); ++k) {
    hp = hp * h;
    fact *= k;
    Jet term = hp;
    term *= derivs[static_cast<std::size_t>(k)] / fact;
    acc += term;
  }
  return acc;
}

/// Derivative sequence of u^p at u0 (falling-factorial coefficients).
std::vector<double> power_derivs(double u0, double p, int order) {
  std::vector<double> d(static_cast<std::size_t>(order) + 1);
  double coeff = 1.0;
  for (int k = 0; k <= order; ++k) {
    d[static_cast<std::size_t>(k)] = coeff * std::pow(u0, p - k);
    coeff *= (p - k);
  }
  return d;
}

}  // namespace

Jet inverse(const Jet& u) {
  if (u.value() == 0.0) throw DomainError("division by zero");
  return compose_series(u, power_derivs(u.value(), -1.0, u.order()));
}

Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }

Jet operator/(double a, const Jet& b) {
  Jet inv = inverse(b);
  inv *= a;
  return inv;
}

Jet sqrt(const Jet& u) {
  if (u.value() < 0.0) throw DomainError("sqrt of a negative value");
  if (u.value() == 0.0 && u.order() >= 1) {
    throw DomainError("sqrt is not differentiable at zero");
  }
  if (u.value() == 0.0) return Jet::constant(u.space(), 0.0, u.order());
  return compose_series(u, power_derivs(u.value(), 0.5, u.order()));
}

Jet exp(const Jet& u) {
  std::vector<double> d(static_cast<std::size_t>(u.order()) + 1, std::exp(u.value()));
  return compose_series(u, d);
}

Jet log(const Jet& u) {
  if (u.value() <= 0.0) throw DomainError("log of a non-positive value");
  std::vector<double> d(static_cast<std::size_t>(u.order()) + 1);
  d[0] = std::log(u.value());
  double sign = 1.0;
  double fact = 1.0;
  for (int k = 1; k <= u.order(); ++k) {
    if (k >= 2) fact *= (k - 1);
    d[static_cast<std::size_t>(k)] = sign * fact / std::pow(u.value(), k);
    sign = -sign;
  }
  return compose_series(u, d);
}

Jet sin(const Jet& u) {
  const double s = std::sin(u.value());
  const double c = std::cos(u.value());
  std::vector<double> d(static_cast<std::size_t>(u.order()) + 1);
  const double cycle[4] = {s, c, -s, -c};
  for (int k = 0; k <= u.order(); ++k) d[static_cast<std::size_t>(k)] = cycle[k % 4];
  return compose_series(u, d);
}

Jet cos(const Jet& u) {
  const double s = std::sin(u.value());
  const double c = std::cos(u.value());
  std::vector<double> d(static_cast<std::size_t>(u.order()) + 1);
  const double cycle[4] = {c, -s, -c, s};
  for (int k = 0; k <= u.order(); ++k) d[static_cast<std::size_t>(k)] = cycle[k % 4];
  return compose_series(u, d);
}

Jet abs(const Jet& u) {
  if (u.value() == 0.0 && u.order() >= 1) {
    throw DomainError("abs is not differentiable at zero");
  }
  return u.value() < 0.0 ? -u : u;
}

Jet pow(const Jet& u, long long k) {
  if (k == 0) return Jet::constant(u.space(), 1.0, u.order());
  const bool negative = k < 0;
  unsigned long long e = negative ? static_cast<unsigned long long>(-k)
                                  : static_cast<unsigned long long>(k);
  Jet base = negative ? inverse(u) : u;
  Jet acc = Jet::constant(u.space(), 1.0, u.order());
  while (e > 0) {
    if (e & 1ull) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return acc;
}

Jet pow(const Jet& u, double p) {
  if (p == std::floor(p) && std::fabs(p) <= 1e9) {
    return pow(u, static_cast<long long>(p));
  }
  if (u.value() <= 0.0) {
    throw DomainError("pow with non-integer exponent needs a positive base");
  }
  return compose_series(u, power_derivs(u.value(), p, u.order()));
}

Jet pow(const Jet& u, const Jet& v) {
  // A constant exponent keeps negative bases usable for integer powers.
  bool v_constant = true;
  const auto& space = *v.space();
  for (int k = 1; k < space.size(); ++k) {
    if (space.degree(k) > v.order()) continue;
    MultiIndex idx = space.basis(k);
    if (v.coefficient(idx) != 0.0) {
      v_constant = false;
      break;
    }
  }
  if (v_constant) return pow(u, v.value());
  if (u.value() <= 0.0) {
    throw DomainError("pow with varying exponent needs a positive base");
  }
  return exp(v * log(u));
}

Jet Jet::substitute(std::span<const Jet> args) const {
  if (!space_) throw Error("Jet: empty");
  if (static_cast<int>(args.size()) != space_->n_vars()) {
    throw Error("Jet: substitute needs one argument per variable");
  }
  const JetSpacePtr target = args[0].space();
  int target_order = args[0].order();
  for (const Jet& a : args) {
    if (a.space() != target) throw Error("Jet: substitute arguments in mixed spaces");
    target_order = std::min(target_order, a.order());
  }
  target_order = std::min(target_order, order_);

  // Powers of the nilpotent parts of the arguments.
  const int n = space_->n_vars();
  std::vector<std::vector<Jet>> powers(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    Jet h = args[static_cast<std::size_t>(v)];
    h -= h.value();
    auto& pv = powers[static_cast<std::size_t>(v)];
    pv.push_back(Jet::constant(target, 1.0, target_order));
    for (int e = 1; e <= order_; ++e) pv.push_back(pv.back() * h);
  }

  Jet acc = Jet::constant(target, 0.0, target_order);
  for (int k = 0; k < space_->size(); ++k) {
    if (space_->degree(k) > order_) continue;
    const double coeff = c_[static_cast<std::size_t>(k)];
    if (coeff == 0.0) continue;
    const MultiIndex& idx = space_->basis(k);
    Jet term = Jet::constant(target, coeff, target_order);
    for (int v = 0; v < n; ++v) {
      if (idx[v] > 0) term = term * powers[static_cast<std::size_t>(v)][static_cast<std::size_t>(idx[v])];
    }
    acc += term;
  }
  return acc;
}

bool identical(const Jet& a, const Jet& b) {
  if (a.space_ != b.space_ || a.order_ != b.order_) return false;
  const int m = a.space_->size();
  for (int k = 0; k < m; ++k) {
    if (a.space_->degree(k) > a.order_) continue;
    if (a.c_[static_cast<std::size_t>(k)] != b.c_[static_cast<std::size_t>(k)]) return false;
  }
  return true;
}

double max_coefficient_difference(const Jet& a, const Jet& b) {
  a.check_same_space(b);
  const int order = std::min(a.order_, b.order_);
  double worst = 0.0;
  const int m = a.space_->size();
  for (int k = 0; k < m; ++k) {
    if (a.space_->degree(k) > order) continue;
    worst = std::max(worst, std::fabs(a.c_[static_cast<std::size_t>(k)] -
                                      b.c_[static_cast<std::size_t>(k)]));
  }
  return worst;
}

int max_jet_order() {
  static const int cap = [] {
    if (const char* env = std::getenv("FP_TENSOR_MAX_ORDER")) {
      const int v = std::atoi(env);
      if (v >= 1 && v <= MultiIndex::kMaxExponent) return v;
    }
    return 4;
  }();
  return cap;
}

std::vector<Jet> jet_lift(const EvalPoint& point, int order) {
  if (order < 0) throw Error("jet_lift: order must be non-negative");
  if (order > max_jet_order()) {
    throw Error("jet_lift: order " + std::to_string(order) +
                " exceeds the configured maximum " + std::to_string(max_jet_order()));
  }
  const int n = point.dim();
  auto space = JetSpace::get(2 * n, order);
  std::vector<Jet> seeds;
  seeds.reserve(static_cast<std::size_t>(2 * n));
  for (int v = 0; v < 2 * n; ++v) {
    seeds.push_back(Jet::variable(space, v, point.coord(v), order));
  }
  return seeds;
}

double jet_extract(const Jet& jet, const MultiIndex& idx) { return jet.partial(idx); }

}  // namespace fp
