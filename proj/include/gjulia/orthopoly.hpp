#ifndef GJULIA_ORTHOPOLY_HPP_
#define GJULIA_ORTHOPOLY_HPP_

#include <optional>
#include <vector>

#include "gjulia/measure.hpp"
#include "gjulia/polynomial.hpp"
#include "gjulia/scalar.hpp"
#include "gjulia/sequence.hpp"

namespace gjulia {

// c_0..c_{D_l - 1} of the equilibrium measure, c_k = s_k(F_l)/D_l.
// `values` is always filled; `exact` / `extended` hold the moments in the
// mode they were computed in.
struct MomentTable {
  int level = 0;
  ScalarMode mode = ScalarMode::kFloat64;
  std::vector<Complex> values;
  std::optional<std::vector<Rational>> exact;
  std::optional<std::vector<ExtFloat>> extended;

  int size() const { return static_cast<int>(values.size()); }
  // Largest |Im c_k| relative to max(1, |c_k|).
  double imaginary_defect() const;
};

// Exact when the tower has rational generators, float otherwise.
Precision default_moment_precision(const CompositionTower& tower);

// Extended mode uses the ExtFloat precision active in the caller.
MomentTable moments(const CompositionTower& tower, int l, Precision precision);
inline MomentTable moments(const CompositionTower& tower, int l) {
  return moments(tower, l, default_moment_precision(tower));
}

struct OrthogonalPolynomialExplicit {
  int index = 0;
  Polynomial<Complex> numeric{Complex(1.0)};
  std::optional<Polynomial<Rational>> exact;
};

// z + (1/d_1) a_{1,d_1-1}/a_{1,d_1}.
OrthogonalPolynomialExplicit explicit_P1(const SequenceSpec& spec);

// (F_l + (1/d_{l+1}) a_{l+1,d-1}/a_{l+1,d}) / lead(F_l), monic of degree D_l.
OrthogonalPolynomialExplicit explicit_P_block(const CompositionTower& tower,
                                              int l);

// The same expression evaluated along the tower, for D_l beyond the cap.
Complex evaluate_P_block(const CompositionTower& tower, int l, Complex z);

// |int p(z) conj(z)^k dm| for k = 0..max_k.
std::vector<double> orthogonality_residual(const Polynomial<Complex>& p,
                                           const DiscreteMeasure& m,
                                           int max_k);

// Recurrence P_{n+1} = (x - b_{n+1}) P_n - a_n^2 P_{n-1}, n = 1..N.
// hankel[n] = det (c_{i+j})_{i,j=0..n} for n = 0..N.
struct JacobiCoefficients {
  int N = 0;
  ScalarMode mode = ScalarMode::kFloat64;
  std::vector<double> a;
  std::vector<double> a2;
  std::vector<double> b;
  std::vector<double> hankel;
  std::optional<std::vector<Rational>> a2_exact;
  std::optional<std::vector<Rational>> b_exact;
  std::optional<std::vector<Rational>> hankel_exact;
  // a_n as a rational when a_n^2 is a perfect square.
  std::vector<std::optional<Rational>> a_exact;
};

// Needs c_0..c_{2N}, i.e. 2N <= D_l - 1, and a real positive definite
// moment matrix.
JacobiCoefficients jacobi_from_moments(const MomentTable& mt, int N);

// Monic P_0..P_n from the recurrence.
std::vector<Polynomial<Rational>> monic_from_jacobi_exact(
    const JacobiCoefficients& jc, int n);
std::vector<Polynomial<double>> monic_from_jacobi(const JacobiCoefficients& jc,
                                                  int n);

// ||P_n||^2 = hankel[n] / hankel[n-1]; p_n = P_n / ||P_n||.
double orthonormal_norm_squared(const JacobiCoefficients& jc, int n);

std::optional<Rational> exact_sqrt(const Rational& value);

struct ResolventEvaluation {
  Complex z;
  Complex value;
  int truncation = 0;
  double tail_bound = 0.0;
};

// -sum_{n <= T} c_n z^{-(n+1)} for |z| > M, with tail (M/|z|)^{T+1}/(|z| - M).
// Without a truncation the smallest T with tail < 1e-10 is used, capped by
// D_l - 1.
ResolventEvaluation resolvent(const MomentTable& mt, Complex z,
                              double support_bound,
                              std::optional<int> truncation = std::nullopt);

// max |z| over the default-anchor preimage measure of the given level; a
// bound for the support of the equilibrium measure.
double support_bound(const CompositionTower& tower, int level = 10);

// |R(z) - R_k(F_k(z)) F_k'(z) / D_k| with R_k the resolvent of the shifted
// sequence (f_{k+n}).
double resolvent_functional_check(const CompositionTower& tower,
                                  const MomentTable& mt,
                                  const MomentTable& shifted_mt, Complex z,
                                  int k, double support, double shifted_support,
                                  std::optional<int> truncation = std::nullopt);

}  // namespace gjulia

#endif  // GJULIA_ORTHOPOLY_HPP_
