#ifndef GJULIA_POLYNOMIAL_HPP_
#define GJULIA_POLYNOMIAL_HPP_

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gjulia/errors.hpp"
#include "gjulia/scalar.hpp"

namespace gjulia {

// Largest degree compose() will materialize before asking the caller to
// fall back to level-by-level tower evaluation.
inline constexpr int kDefaultCompositionCap = 4096;

// Dense univariate polynomial, ascending coefficient order: coefficient j
// multiplies z^j. The leading coefficient is always nonzero, so the zero
// polynomial is not representable.
template <class Scalar>
class Polynomial {
 public:
  using scalar_type = Scalar;
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit Polynomial(Coefficients coefficients)
      : coefficients_(std::move(coefficients)) {
    Eigen::Index size = coefficients_.size();
    while (size > 0 && is_zero(coefficients_(size - 1))) --size;
    if (size == 0) throw InputError("zero polynomial has no degree");
    coefficients_.conservativeResize(size);
  }

  Polynomial(std::initializer_list<Scalar> coefficients)
      : Polynomial(from_list(coefficients)) {}

  static Polynomial constant(const Scalar& value) {
    Coefficients c(1);
    c(0) = value;
    return Polynomial(std::move(c));
  }

  static Polynomial monomial(int degree, const Scalar& coefficient = Scalar(1)) {
    Coefficients c = Coefficients::Zero(degree + 1);
    c(degree) = coefficient;
    return Polynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  const Coefficients& coefficients() const { return coefficients_; }
  const Scalar& leading() const { return coefficients_(degree()); }

  // Coefficient of z^j; zero above the degree.
  Scalar operator[](int j) const {
    return j >= 0 && j <= degree() ? coefficients_(j) : Scalar(0);
  }

  template <class Z>
  Z operator()(const Z& z) const;

  Polynomial monic() const {
    Coefficients c = coefficients_ / leading();
    c(degree()) = Scalar(1);
    return Polynomial(std::move(c));
  }

  template <class To>
  Polynomial<To> cast() const {
    typename Polynomial<To>::Coefficients c(coefficients_.size());
    for (Eigen::Index j = 0; j < c.size(); ++j)
      c(j) = scalar_cast<To>(coefficients_(j));
    return Polynomial<To>(std::move(c));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.coefficients_.size() == b.coefficients_.size() &&
           a.coefficients_ == b.coefficients_;
  }

 private:
  static Coefficients from_list(std::initializer_list<Scalar> list) {
    Coefficients c(static_cast<Eigen::Index>(list.size()));
    Eigen::Index j = 0;
    for (const auto& v : list) c(j++) = v;
    return c;
  }

  Coefficients coefficients_;
};

namespace detail {

template <class Z>
bool is_finite_value(const Z& z) {
  if constexpr (is_complex_v<Z>) {
    return is_finite_value(z.real()) && is_finite_value(z.imag());
  } else if constexpr (std::is_floating_point_v<Z>) {
    return std::isfinite(z);
  } else if constexpr (std::is_same_v<Z, ExtFloat>) {
    return boost::multiprecision::isfinite(z);
  } else {
    return true;
  }
}

// Overflowed float results are reported as +inf magnitude rather than a NaN
// produced by inf - inf.
template <class Z>
Z infinite_like() {
  if constexpr (is_complex_v<Z>) {
    using R = typename Z::value_type;
    return Z(std::numeric_limits<R>::infinity(), R(0));
  } else {
    return std::numeric_limits<Z>::infinity();
  }
}

}  // namespace detail

// Horner evaluation. Z may be wider than the coefficient type
// (e.g. rational coefficients at a complex<double> point).
template <class Scalar, class Z>
Z evaluate(const Polynomial<Scalar>& p, const Z& z) {
  const auto& c = p.coefficients();
  Z result = scalar_cast<Z>(c(p.degree()));
  for (int j = p.degree() - 1; j >= 0; --j)
    result = result * z + scalar_cast<Z>(c(j));
  if constexpr (std::is_floating_point_v<Z> || is_complex_v<Z>) {
    if (!detail::is_finite_value(result) && detail::is_finite_value(z))
      return detail::infinite_like<Z>();
  }
  return result;
}

template <class Scalar>
template <class Z>
Z Polynomial<Scalar>::operator()(const Z& z) const {
  return evaluate(*this, z);
}

// Value and first derivative by simultaneous Horner.
template <class Scalar, class Z>
std::pair<Z, Z> evaluate_with_derivative(const Polynomial<Scalar>& p,
                                         const Z& z) {
  const auto& c = p.coefficients();
  Z value = scalar_cast<Z>(c(p.degree()));
  Z slope = Z(0);
  for (int j = p.degree() - 1; j >= 0; --j) {
    slope = slope * z + value;
    value = value * z + scalar_cast<Z>(c(j));
  }
  return {value, slope};
}

template <class Scalar>
Polynomial<Scalar> operator+(const Polynomial<Scalar>& a,
                             const Polynomial<Scalar>& b) {
  const Eigen::Index n = std::max(a.coefficients().size(),
                                  b.coefficients().size());
  typename Polynomial<Scalar>::Coefficients c =
      Polynomial<Scalar>::Coefficients::Zero(n);
  c.head(a.coefficients().size()) += a.coefficients();
  c.head(b.coefficients().size()) += b.coefficients();
  return Polynomial<Scalar>(std::move(c));
}

template <class Scalar>
Polynomial<Scalar> operator+(const Polynomial<Scalar>& p,
                             const Scalar& constant) {
  auto c = p.coefficients();
  c(0) += constant;
  return Polynomial<Scalar>(std::move(c));
}

template <class Scalar>
Polynomial<Scalar> operator-(const Polynomial<Scalar>& p,
                             const Scalar& constant) {
  auto c = p.coefficients();
  c(0) -= constant;
  return Polynomial<Scalar>(std::move(c));
}

template <class Scalar>
Polynomial<Scalar> operator*(const Polynomial<Scalar>& p,
                             const Scalar& factor) {
  return Polynomial<Scalar>(p.coefficients() * factor);
}

template <class Scalar>
Polynomial<Scalar> operator*(const Polynomial<Scalar>& a,
                             const Polynomial<Scalar>& b) {
  const int n = a.degree();
  const int m = b.degree();
  typename Polynomial<Scalar>::Coefficients c =
      Polynomial<Scalar>::Coefficients::Zero(n + m + 1);
  for (int i = 0; i <= n; ++i) {
    if (is_zero(a.coefficients()(i))) continue;
    c.segment(i, m + 1) += a.coefficients()(i) * b.coefficients();
  }
  return Polynomial<Scalar>(std::move(c));
}

// Rational product over a common denominator: integer convolution, then one
// normalization per coefficient.
inline Polynomial<Rational> operator*(const Polynomial<Rational>& a,
                                      const Polynomial<Rational>& b) {
  auto scaled = [](const Polynomial<Rational>& p, BigInt& denominator) {
    denominator = 1;
    for (Eigen::Index i = 0; i < p.coefficients().size(); ++i)
      denominator = boost::multiprecision::lcm(
          denominator, boost::multiprecision::denominator(p.coefficients()(i)));
    std::vector<BigInt> out(p.coefficients().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Rational& c = p.coefficients()(static_cast<Eigen::Index>(i));
      out[i] = boost::multiprecision::numerator(c) *
               (denominator / boost::multiprecision::denominator(c));
    }
    return out;
  };
  BigInt da, db;
  const auto A = scaled(a, da);
  const auto B = scaled(b, db);
  std::vector<BigInt> c(A.size() + B.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i] == 0) continue;
    for (std::size_t j = 0; j < B.size(); ++j)
      if (B[j] != 0) c[i + j] += A[i] * B[j];
  }
  const BigInt d = da * db;
  Polynomial<Rational>::Coefficients out(static_cast<Eigen::Index>(c.size()));
  for (std::size_t k = 0; k < c.size(); ++k)
    out(static_cast<Eigen::Index>(k)) = Rational(c[k], d);
  return Polynomial<Rational>(std::move(out));
}

template <class Scalar>
Polynomial<Scalar> derivative(const Polynomial<Scalar>& p) {
  if (p.degree() < 1)
    throw PreconditionError("derivative requires degree >= 1");
  typename Polynomial<Scalar>::Coefficients c(p.degree());
  for (int j = 1; j <= p.degree(); ++j)
    c(j - 1) = p.coefficients()(j) * Scalar(j);
  return Polynomial<Scalar>(std::move(c));
}

// outer(inner(z)). Refuses results above `cap` so exponential towers are
// never expanded by accident.
template <class Scalar>
Polynomial<Scalar> compose(const Polynomial<Scalar>& outer,
                           const Polynomial<Scalar>& inner,
                           int cap = kDefaultCompositionCap) {
  if (outer.degree() < 1 || inner.degree() < 1)
    throw PreconditionError("compose requires both degrees >= 1");
  const long long degree =
      static_cast<long long>(outer.degree()) * inner.degree();
  if (degree > cap)
    throw PreconditionError("composition degree " + std::to_string(degree) +
                            " exceeds cap " + std::to_string(cap) +
                            "; use tower evaluation instead");
  Polynomial<Scalar> result = Polynomial<Scalar>::constant(outer.leading());
  for (int j = outer.degree() - 1; j >= 0; --j) {
    result = result * inner;
    auto c = result.coefficients();
    c(0) += outer.coefficients()(j);
    result = Polynomial<Scalar>(std::move(c));
  }
  return result;
}

// compose() for float scalars with overflow detection. When a coefficient
// overflows the polynomial is dropped and only log|leading| is reported.
template <class Scalar>
struct ComposeOutcome {
  std::optional<Polynomial<Scalar>> polynomial;
  bool overflow = false;
  double log_abs_leading = 0.0;
};

template <class Scalar>
ComposeOutcome<Scalar> compose_checked(const Polynomial<Scalar>& outer,
                                       const Polynomial<Scalar>& inner,
                                       int cap = kDefaultCompositionCap) {
  ComposeOutcome<Scalar> out;
  out.log_abs_leading = std::log(magnitude(outer.leading())) +
                        outer.degree() * std::log(magnitude(inner.leading()));
  Polynomial<Scalar> p = compose(outer, inner, cap);
  const auto& c = p.coefficients();
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    if (!detail::is_finite_value(c(j))) {
      out.overflow = true;
      return out;
    }
  }
  out.polynomial = std::move(p);
  return out;
}

template <class Scalar>
bool has_finite_coefficients(const Polynomial<Scalar>& p) {
  const auto& c = p.coefficients();
  for (Eigen::Index j = 0; j < c.size(); ++j)
    if (!detail::is_finite_value(c(j))) return false;
  return true;
}

// Root power sums s_1..s_K of a polynomial.
template <class Scalar>
struct PowerSumTable {
  std::vector<Scalar> values;  // values[k - 1] = s_k
  int source_degree = 0;
  int valid_up_to = 0;

  const Scalar& operator()(int k) const { return values.at(k - 1); }
};

// Newton's identities for k = 1..K with K <= deg - 1. The constant
// coefficient never enters, so the result is invariant under p -> p + c.
template <class Scalar>
PowerSumTable<Scalar> power_sums(const Polynomial<Scalar>& p, int K) {
  const int n = p.degree();
  if (K < 1 || K > n - 1)
    throw PreconditionError("power_sums: K=" + std::to_string(K) +
                            " outside 1.." + std::to_string(n - 1));
  const auto& a = p.coefficients();
  const Scalar lead = a(n);
  PowerSumTable<Scalar> table;
  table.source_degree = n;
  table.valid_up_to = K;
  table.values.reserve(K);
  for (int k = 1; k <= K; ++k) {
    Scalar acc = Scalar(k) * a(n - k);
    for (int i = 1; i < k; ++i) acc += a(n - i) * table.values[k - i - 1];
    table.values.push_back(-acc / lead);
  }
  return table;
}

// Euclidean division over a field. Zero quotient or remainder is reported
// as nullopt.
template <class Scalar>
struct DivisionResult {
  std::optional<Polynomial<Scalar>> quotient;
  std::optional<Polynomial<Scalar>> remainder;
};

template <class Scalar>
DivisionResult<Scalar> divide(const Polynomial<Scalar>& numerator,
                              const Polynomial<Scalar>& divisor) {
  const int n = numerator.degree();
  const int m = divisor.degree();
  if (n < m) return {std::nullopt, numerator};
  typename Polynomial<Scalar>::Coefficients r = numerator.coefficients();
  typename Polynomial<Scalar>::Coefficients q =
      Polynomial<Scalar>::Coefficients::Zero(n - m + 1);
  const Scalar lead = divisor.leading();
  for (int k = n - m; k >= 0; --k) {
    const Scalar factor = r(k + m) / lead;
    q(k) = factor;
    if (is_zero(factor)) continue;
    r.segment(k, m + 1) -= factor * divisor.coefficients();
    r(k + m) = Scalar(0);
  }
  DivisionResult<Scalar> out{Polynomial<Scalar>(std::move(q)), std::nullopt};
  Eigen::Index size = m;
  while (size > 0 && is_zero(r(size - 1))) --size;
  if (size > 0) out.remainder = Polynomial<Scalar>(r.head(size));
  return out;
}

}  // namespace gjulia

#endif  // GJULIA_POLYNOMIAL_HPP_
