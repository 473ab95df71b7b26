#ifndef GJULIA_K1_GAMMA_HPP_
#define GJULIA_K1_GAMMA_HPP_

#include <optional>
#include <string>
#include <vector>

#include "gjulia/scalar.hpp"
#include "gjulia/sequence.hpp"

namespace gjulia {

enum class GammaTail {
  kRepeatLast,
  kRepeatCycle,
  kFinite,
  kEpsilonGeometric,  // eps_n = scale * ratio^n
  kEpsilonPower,      // eps_n = scale * (n + offset)^(-power)
};

const char* to_string(GammaTail tail);

// gamma_n in (0, 1/4] for f_n(z) = (z^2 - 1)/(2 gamma_n) + 1. List tails
// repeat `values`; formula tails define every gamma_n through eps_n.
class GammaSequence {
 public:
  static GammaSequence from_list(std::vector<Rational> gamma, GammaTail tail);
  static GammaSequence constant(const Rational& gamma);
  static GammaSequence epsilon_geometric(const Rational& scale,
                                         const Rational& ratio);
  static GammaSequence epsilon_power(const Rational& scale, double power,
                                     int offset);

  GammaTail tail() const { return tail_; }
  const std::vector<Rational>& values() const { return values_; }
  std::optional<int> length() const;

  long double gamma(int n) const;
  long double epsilon(int n) const;
  // gamma_n as a rational when the tail allows it.
  std::optional<Rational> gamma_exact(int n) const;
  // log delta_n = sum_{j <= n} log gamma_j.
  long double log_delta(int n) const;

  // inf and sup over all n (the formula tails are monotone in n).
  long double gamma_inf() const;
  long double gamma_sup() const;

  // The generator sequence, tagged k1_gamma. Regularity constants:
  // A1 = 1/(2 sup gamma), A2 = 1 - 2 inf gamma, A3 = log(1/(2 inf gamma))/2.
  SequenceSpec to_spec() const;

  // Formula parameters (meaningful for the formula tails only).
  Rational scale() const { return scale_; }
  Rational ratio() const { return ratio_; }
  double power() const { return power_; }
  int offset() const { return offset_; }

 private:
  GammaSequence() = default;
  void validate() const;

  GammaTail tail_ = GammaTail::kRepeatLast;
  std::vector<Rational> values_;
  Rational scale_ = 0;
  Rational ratio_ = 0;
  double power_ = 0;
  int offset_ = 0;
};

// sqrt(1 - 2 gamma (1 - t)).
long double v_map(long double gamma, long double t);

// s_1 v_{gamma_1}(s_2 v_{gamma_2}( ... s_n v_{gamma_n}(-1))), signs in {+1,-1}.
long double endpoints(const GammaSequence& gs, const std::vector<int>& signs);

// 1 - v_{gamma_1}( ... v_{gamma_n}(-1)), evaluated without cancellation
// through e_k = 2 gamma_k e_{k+1} / (1 + sqrt(1 - 2 gamma_k e_{k+1})),
// e_{n+1} = 2. Returns 2 for n = 0.
long double first_interval_length(const GammaSequence& gs, int n);

struct GammaCapacity {
  double value = 0;
  double tail_bound = 0;  // bound on the omitted part of the log series
  int terms = 0;
};

// 2 exp(sum 2^{-n} log gamma_n).
GammaCapacity capacity_closed_form(const GammaSequence& gs, double tol = 1e-14);

enum class Verdict { kOptimalHolder, kNotOptimal, kInconclusive };
const char* to_string(Verdict verdict);

struct SmoothnessReport {
  Verdict verdict = Verdict::kInconclusive;
  std::string reason;
  std::vector<double> epsilon_partial_sums;  // sum_{k <= n} eps_k
  std::vector<double> four_n_delta;          // 4^n delta_n
};

SmoothnessReport smoothness_verdict(const GammaSequence& gs, int horizon);

struct HolderSample {
  double t = 0;
  double green = 0;
  double ratio = 0;                    // G(1 + t) / sqrt(t)
  std::optional<double> exact_green;  // gamma = 1/4 only
};

struct HolderProbe {
  Verdict verdict = Verdict::kInconclusive;
  std::vector<HolderSample> samples;
  double max_ratio = 0;
};

// z = 1 + t with t log-spaced from 1e-1 to 1e-6; dist(z, K) = t since
// 1 is the right end of K. The ratio is computed regardless of the verdict.
HolderProbe holder_constant_probe(const GammaSequence& gs,
                                  const CompositionTower& tower,
                                  int sample_count = 11);

enum class PWHint { kConvergent, kDivergent, kNone };
const char* to_string(PWHint hint);

struct PWSummary {
  std::vector<double> critical_points;  // z_n in Z_{n-1}
  std::vector<double> terms;            // s_n = 2^{n-1} G(z_n)
  std::vector<double> partial_sums;
  std::vector<bool> lower_bound_ok;     // s_n > 2 eps_n (s_n = 0 when eps_n = 0)
  PWHint verdict_hint = PWHint::kNone;
  int depth_offset = 40;
};

// s_n from the critical value F_n(z_n) = -1 - sigma_n, tracking
// w_k = F_k(z_n) - 1 by w_{k+1} = w_k (2 + w_k) / (2 gamma_{k+1}) so that
// tiny sigma_n lose nothing to cancellation, to depth n + depth_offset.
PWSummary pw_sum(const GammaSequence& gs, int N, int depth_offset = 40);

// Z_{n-1}: every root of F_{n-1}, as the nested radicals over all sign
// words, each verified to |F_{n-1}(x)| < 1e-10.
std::vector<long double> critical_set(const GammaSequence& gs, int n,
                                      std::size_t cap = std::size_t{1} << 16);

struct K1Row {
  int n = 0;
  double gamma = 0, epsilon = 0, delta = 0, first_length = 0, pw_term = 0,
         pw_partial = 0;
};

// Rows n = 1..N with (n, gamma_n, eps_n, delta_n, l_{1,n}, s_n, S_n).
std::vector<K1Row> k1_table(const GammaSequence& gs, int N);

}  // namespace gjulia

#endif  // GJULIA_K1_GAMMA_HPP_
