#include "gjulia/orthopoly.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "gjulia/errors.hpp"

namespace gjulia {

namespace {

constexpr const char* kNotPositive = "measure not real or N too large for level";

void require_materializable(const CompositionTower& tower, int l) {
  if (l < 1 || l > tower.levels())
    throw PreconditionError("level " + std::to_string(l) + " out of range");
  if (tower.cumulative_degree(l) > tower.options().materialization_cap)
    throw PreconditionError("D_" + std::to_string(l) + " = " +
                            tower.cumulative_degree(l).str() +
                            " exceeds the materialization cap; use a lower level");
}

Polynomial<ExtFloat> extended_generator(const Generator& g) {
  if (g.exact) return g.exact->cast<ExtFloat>();
  if (!g.is_real())
    throw PreconditionError("extended precision needs real coefficients");
  return g.numeric.cast<ExtFloat>();
}

}  // namespace

double MomentTable::imaginary_defect() const {
  double worst = 0.0;
  for (const Complex& c : values)
    worst = std::max(worst, std::abs(c.imag()) / std::max(1.0, std::abs(c)));
  return worst;
}

Precision default_moment_precision(const CompositionTower& tower) {
  Precision p;
  if (tower.exact()) p.mode = ScalarMode::kExactRational;
  return p;
}

MomentTable moments(const CompositionTower& tower, int l, Precision precision) {
  require_materializable(tower, l);
  const int D = static_cast<int>(tower.cumulative_degree(l));
  MomentTable mt;
  mt.level = l;
  mt.mode = precision.mode;
  mt.values.assign(D, Complex(0.0));
  mt.values[0] = Complex(1.0);
  switch (precision.mode) {
    case ScalarMode::kExactRational: {
      if (!tower.exact())
        throw PreconditionError(
            "exact moments need real rational generator coefficients");
      const auto sums = power_sums(tower.composed_exact(l), D - 1);
      std::vector<Rational> c(D);
      c[0] = 1;
      for (int k = 1; k < D; ++k) {
        c[k] = sums(k) / D;
        mt.values[k] = Complex(to_double(c[k]), 0.0);
      }
      mt.exact = std::move(c);
      break;
    }
    case ScalarMode::kExtended: {
      Polynomial<ExtFloat> F = extended_generator(tower.generator(1));
      for (int n = 2; n <= l; ++n)
        F = compose(extended_generator(tower.generator(n)), F,
                    tower.options().materialization_cap);
      const auto sums = power_sums(F, D - 1);
      std::vector<ExtFloat> c(D);
      c[0] = 1;
      for (int k = 1; k < D; ++k) {
        c[k] = sums(k) / D;
        mt.values[k] = Complex(to_double(c[k]), 0.0);
      }
      mt.extended = std::move(c);
      break;
    }
    case ScalarMode::kFloat64: {
      if (l > tower.materialized_levels())
        throw NumericalError("F_" + std::to_string(l) +
                             " overflows double coefficients; use --precision "
                             "rational or ext:<bits>");
      const auto sums = power_sums(tower.composed(l), D - 1);
      for (int k = 1; k < D; ++k) mt.values[k] = sums(k) / static_cast<double>(D);
      break;
    }
  }
  return mt;
}

OrthogonalPolynomialExplicit explicit_P1(const SequenceSpec& spec) {
  const Generator f = spec.generator(1);
  const int d = f.degree();
  OrthogonalPolynomialExplicit out;
  out.index = 1;
  const Complex shift = f.numeric[d - 1] / (static_cast<double>(d) * f.numeric.leading());
  out.numeric = Polynomial<Complex>{shift, Complex(1.0)};
  if (f.exact) {
    const Rational s = (*f.exact)[d - 1] / (d * f.exact->leading());
    out.exact = Polynomial<Rational>{s, Rational(1)};
  }
  return out;
}

namespace {

template <class S>
S block_shift(const Polynomial<S>& next) {
  const int d = next.degree();
  return next[d - 1] / (S(d) * next.leading());
}

}  // namespace

OrthogonalPolynomialExplicit explicit_P_block(const CompositionTower& tower,
                                              int l) {
  if (l < 1 || l + 1 > tower.levels())
    throw PreconditionError("explicit_P_block needs f_" +
                            std::to_string(l + 1));
  if (tower.cumulative_degree(l) > tower.options().materialization_cap)
    throw PreconditionError("D_" + std::to_string(l) + " = " +
                            tower.cumulative_degree(l).str() +
                            " exceeds the materialization cap; evaluate "
                            "P_{D_l} along the tower (evaluate_P_block)");
  OrthogonalPolynomialExplicit out;
  out.index = static_cast<int>(tower.cumulative_degree(l));
  if (tower.exact()) {
    const Polynomial<Rational> F = tower.composed_exact(l);
    const Rational shift = block_shift(*tower.generator(l + 1).exact);
    const Rational inv = 1 / F.leading();
    out.exact = (F + shift) * inv;
    out.numeric = out.exact->cast<Complex>();
    return out;
  }
  if (l > tower.materialized_levels())
    throw NumericalError("F_" + std::to_string(l) +
                         " overflows double coefficients; evaluate P_{D_l} "
                         "along the tower (evaluate_P_block)");
  const Polynomial<Complex>& F = tower.composed(l);
  const Complex shift = block_shift(tower.generator(l + 1).numeric);
  out.numeric = ((F + shift) * (Complex(1.0) / F.leading())).monic();
  return out;
}

Complex evaluate_P_block(const CompositionTower& tower, int l, Complex z) {
  if (l < 1 || l + 1 > tower.levels())
    throw PreconditionError("evaluate_P_block needs f_" +
                            std::to_string(l + 1));
  const Complex shift = block_shift(tower.generator(l + 1).numeric);
  Complex log_lead(0.0);
  for (int j = 1; j <= l; ++j)
    log_lead += (tower.inverse_cumulative_degree(j) /
                 tower.inverse_cumulative_degree(l)) *
                std::log(tower.generator(j).numeric.leading());
  const TowerPoint state = tower_eval(tower, z, l);
  if (!state.log_scale) {
    const Complex v = state.value + shift;
    if (v == Complex(0.0)) return v;
    return std::exp(std::log(v) - log_lead);
  }
  const Complex log_f =
      state.log_value + std::log(1.0 + shift * std::exp(-state.log_value));
  return std::exp(log_f - log_lead);
}

std::vector<double> orthogonality_residual(const Polynomial<Complex>& p,
                                           const DiscreteMeasure& m,
                                           int max_k) {
  if (max_k < 0) throw PreconditionError("max_k must be >= 0");
  std::vector<Complex> sums(max_k + 1, Complex(0.0));
  for (Eigen::Index i = 0; i < m.points.size(); ++i) {
    const Complex z = m.points(i);
    const Complex value = evaluate(p, z);
    Complex power(1.0);
    for (int k = 0; k <= max_k; ++k) {
      sums[k] += value * power;
      power *= std::conj(z);
    }
  }
  std::vector<double> out(max_k + 1);
  for (int k = 0; k <= max_k; ++k) out[k] = std::abs(sums[k]) * m.weight_value();
  return out;
}

std::optional<Rational> exact_sqrt(const Rational& value) {
  if (value < 0) return std::nullopt;
  const BigInt num = numerator(value), den = denominator(value);
  const BigInt rn = sqrt(num), rd = sqrt(den);
  if (rn * rn != num || rd * rd != den) return std::nullopt;
  return Rational(rn, rd);
}

namespace {

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      const Rational factor = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  return det;
}

// det (c_{i+j})_{i,j=0..n}, or with the last column replaced by c_{i+n+1}.
Rational hankel_det(const std::vector<Rational>& c, int n, bool shifted) {
  std::vector<std::vector<Rational>> m(n + 1, std::vector<Rational>(n + 1));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      m[i][j] = c[i + j + (shifted && j == n ? 1 : 0)];
  return determinant(std::move(m));
}

void fill_exact(JacobiCoefficients& jc, const std::vector<Rational>& c) {
  const int N = jc.N;
  std::vector<Rational> H(N + 1), Hs(N);
  for (int n = 0; n <= N; ++n) {
    H[n] = hankel_det(c, n, false);
    if (H[n] <= 0) throw PreconditionError(kNotPositive);
  }
  for (int n = 0; n < N; ++n) Hs[n] = hankel_det(c, n, true);
  std::vector<Rational> a2(N), b(N);
  Rational sigma_prev = 0;
  for (int n = 1; n <= N; ++n) {
    const Rational before = n >= 2 ? H[n - 2] : Rational(1);
    a2[n - 1] = H[n] * before / (H[n - 1] * H[n - 1]);
    const Rational sigma = Hs[n - 1] / H[n - 1];
    b[n - 1] = sigma - sigma_prev;
    sigma_prev = sigma;
  }
  for (int n = 0; n < N; ++n) {
    jc.a2.push_back(to_double(a2[n]));
    jc.b.push_back(to_double(b[n]));
    jc.a_exact.push_back(exact_sqrt(a2[n]));
    jc.a.push_back(jc.a_exact.back() ? to_double(*jc.a_exact.back())
                                     : std::sqrt(jc.a2.back()));
  }
  for (const auto& h : H) jc.hankel.push_back(to_double(h));
  jc.a2_exact = std::move(a2);
  jc.b_exact = std::move(b);
  jc.hankel_exact = std::move(H);
}

template <class T>
void fill_factored(JacobiCoefficients& jc, const std::vector<T>& c) {
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  const int N = jc.N;
  Matrix H(N + 1, N + 1), S(N, N);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) H(i, j) = c[i + j];
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) S(i, j) = c[i + j + 1];
  Eigen::LLT<Matrix> llt(H);
  if (llt.info() != Eigen::Success) throw PreconditionError(kNotPositive);
  const Matrix L = llt.matrixL();
  for (int i = 0; i <= N; ++i)
    if (!(L(i, i) > 0)) throw PreconditionError(kNotPositive);
  const Matrix Linv =
      L.template triangularView<Eigen::Lower>().solve(Matrix::Identity(N + 1, N + 1));
  T det = 1;
  for (int n = 0; n <= N; ++n) {
    det *= L(n, n) * L(n, n);
    jc.hankel.push_back(to_double(det));
  }
  for (int n = 1; n <= N; ++n) {
    const T ratio = L(n, n) / L(n - 1, n - 1);
    jc.a.push_back(to_double(ratio));
    jc.a2.push_back(to_double(T(ratio * ratio)));
    jc.a_exact.push_back(std::nullopt);
  }
  for (int n = 0; n < N; ++n) {
    // Monic P_n coefficients: row n of L^{-1} scaled by L_nn.
    Eigen::Matrix<T, Eigen::Dynamic, 1> v = Linv.row(n).head(n + 1).transpose() * L(n, n);
    const T num = v.dot(S.topLeftCorner(n + 1, n + 1) * v);
    jc.b.push_back(to_double(T(num / (L(n, n) * L(n, n)))));
  }
}

}  // namespace

JacobiCoefficients jacobi_from_moments(const MomentTable& mt, int N) {
  if (N < 1) throw PreconditionError("N must be >= 1");
  if (2 * N > mt.size() - 1)
    throw PreconditionError("N = " + std::to_string(N) + " needs moments up to c_" +
                            std::to_string(2 * N) + "; level " +
                            std::to_string(mt.level) + " provides c_0..c_" +
                            std::to_string(mt.size() - 1));
  if (mt.imaginary_defect() > 1e-12) throw PreconditionError(kNotPositive);
  JacobiCoefficients jc;
  jc.N = N;
  jc.mode = mt.mode;
  if (mt.exact) {
    fill_exact(jc, *mt.exact);
  } else if (mt.extended) {
    fill_factored(jc, *mt.extended);
  } else {
    std::vector<double> c(mt.values.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = mt.values[k].real();
    fill_factored(jc, c);
  }
  return jc;
}

namespace {

template <class S>
std::vector<Polynomial<S>> recurrence(const std::vector<S>& a2,
                                      const std::vector<S>& b, int n) {
  if (n < 0 || n > static_cast<int>(b.size()))
    throw PreconditionError("degree outside the available recurrence");
  std::vector<Polynomial<S>> P{Polynomial<S>{S(1)}};
  if (n >= 1) P.push_back(Polynomial<S>{S(-b[0]), S(1)});
  for (int k = 1; k < n; ++k) {
    const Polynomial<S> factor{S(-b[k]), S(1)};
    P.push_back(factor * P[k] + P[k - 1] * S(-a2[k - 1]));
  }
  return P;
}

}  // namespace

std::vector<Polynomial<Rational>> monic_from_jacobi_exact(
    const JacobiCoefficients& jc, int n) {
  if (!jc.a2_exact || !jc.b_exact)
    throw PreconditionError("coefficients were not computed exactly");
  return recurrence(*jc.a2_exact, *jc.b_exact, n);
}

std::vector<Polynomial<double>> monic_from_jacobi(const JacobiCoefficients& jc,
                                                  int n) {
  return recurrence(jc.a2, jc.b, n);
}

double orthonormal_norm_squared(const JacobiCoefficients& jc, int n) {
  if (n < 0 || n > jc.N) throw PreconditionError("index outside 0..N");
  if (jc.hankel_exact)
    return to_double(n == 0 ? (*jc.hankel_exact)[0]
                            : (*jc.hankel_exact)[n] / (*jc.hankel_exact)[n - 1]);
  double norm = jc.hankel[0];
  for (int k = 1; k <= n; ++k) norm *= jc.a2[k - 1];
  return norm;
}

ResolventEvaluation resolvent(const MomentTable& mt, Complex z,
                              double support_bound,
                              std::optional<int> truncation) {
  const double r = std::abs(z);
  if (!(r > support_bound))
    throw PreconditionError("resolvent series needs |z| > M (|z| = " +
                            std::to_string(r) + ", M = " +
                            std::to_string(support_bound) + ")");
  const int max_t = mt.size() - 1;
  auto tail = [&](int T) {
    return std::pow(support_bound / r, T + 1) / (r - support_bound);
  };
  int T = 0;
  if (truncation) {
    T = *truncation;
    if (T < 0 || T > max_t)
      throw PreconditionError("truncation must lie in 0..D_l - 1 = " +
                              std::to_string(max_t));
  } else {
    while (T < max_t && tail(T) >= 1e-10) ++T;
  }
  ResolventEvaluation out;
  out.z = z;
  out.truncation = T;
  out.tail_bound = tail(T);
  const Complex inv = 1.0 / z;
  Complex power = inv;
  Complex sum(0.0);
  for (int n = 0; n <= T; ++n) {
    sum += mt.values[n] * power;
    power *= inv;
  }
  out.value = -sum;
  return out;
}

double support_bound(const CompositionTower& tower, int level) {
  level = std::min(level, tower.levels());
  while (level > 1 && tower.cumulative_degree(level) > BigInt(1 << 16)) --level;
  return support_radius(preimage_measure(tower, default_anchor(tower), level));
}

double resolvent_functional_check(const CompositionTower& tower,
                                  const MomentTable& mt,
                                  const MomentTable& shifted_mt, Complex z,
                                  int k, double support,
                                  double shifted_support,
                                  std::optional<int> truncation) {
  if (k < 0) throw PreconditionError("depth k must be >= 0");
  const Complex lhs = resolvent(mt, z, support, truncation).value;
  if (k == 0) return 0.0;
  const auto [w, slope] = tower_eval_with_derivative(tower, z, k);
  std::optional<int> t_shift = truncation;
  if (t_shift) t_shift = std::min(*t_shift, shifted_mt.size() - 1);
  const Complex rhs = resolvent(shifted_mt, w, shifted_support, t_shift).value *
                      slope * tower.inverse_cumulative_degree(k);
  return std::abs(lhs - rhs);
}

}  // namespace gjulia
