#ifndef GJULIA_SEQUENCE_HPP_
#define GJULIA_SEQUENCE_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gjulia/polynomial.hpp"
#include "gjulia/scalar.hpp"

namespace gjulia {

enum class Family { kExplicit, kQuadraticC, kK1Gamma, kAutonomous };
enum class TailRule { kRepeatLast, kRepeatCycle, kFinite };

const char* to_string(Family family);
const char* to_string(TailRule tail);

// A coefficient with rational real and imaginary parts, as read from input.
struct ComplexRational {
  Rational re;
  Rational im;
};

// One f_n: always available in complex<double>; the exact form is present
// when every coefficient is a real rational.
struct Generator {
  Polynomial<Complex> numeric;
  std::optional<Polynomial<Rational>> exact;

  static Generator from_exact(const Polynomial<Rational>& p);
  static Generator from_coefficients(const std::vector<ComplexRational>& c);
  static Generator from_numeric(const Polynomial<Complex>& p);

  int degree() const { return numeric.degree(); }
  bool is_real() const;
};

struct RegularityConstants {
  double A1 = 1.0;
  double A2 = 1.0;
  double A3 = 1.0;
};

// The defining data (f_n) of a generalized Julia set. Generators are
// produced on demand by `source`, so infinite sequences are fine; `length`
// is set only for explicit-finite data.
class SequenceSpec {
 public:
  using Source = std::function<Generator(int)>;

  SequenceSpec(Family family, TailRule tail, Source source,
               std::optional<int> length, RegularityConstants constants);

  // Constants default to the witnesses over the stored list, which are exact
  // for repeat-last and repeat-cycle tails.
  static SequenceSpec from_list(
      std::vector<Generator> generators, TailRule tail,
      std::optional<RegularityConstants> constants = std::nullopt);
  static SequenceSpec autonomous(
      Generator f, std::optional<RegularityConstants> constants = std::nullopt);
  // f_n(z) = z^2 + c_n.
  static SequenceSpec quadratic_c(
      const std::vector<ComplexRational>& c, TailRule tail,
      std::optional<RegularityConstants> constants = std::nullopt);

  Family family() const { return family_; }
  TailRule tail() const { return tail_; }
  std::optional<int> length() const { return length_; }
  const RegularityConstants& constants() const { return constants_; }

  // f_n for n >= 1.
  Generator generator(int n) const;
  int degree(int n) const { return generator(n).degree(); }

  // The sequence (f_{k+1}, f_{k+2}, ...).
  SequenceSpec shifted(int k) const;
  SequenceSpec with_constants(RegularityConstants constants) const;
  SequenceSpec with_family(Family family) const;

 private:
  Family family_;
  TailRule tail_;
  Source source_;
  std::optional<int> length_;
  RegularityConstants constants_;
};

struct RegularityViolation {
  int n = 0;
  int j = 0;  // coefficient index; -1 when the whole polynomial is at fault
  std::string inequality;  // "degree", "A1", "A2" or "A3"
  std::string message;
};

// Tightest witnesses over n = 1..horizon together with any violations of
// the constants stored in the spec.
struct RegularityReport {
  bool ok = true;
  int horizon = 0;
  double min_leading = 0.0;                 // min |a_{n,d_n}|
  double max_ratio = 0.0;                   // max |a_{n,j}| / |a_{n,d_n}|
  double max_log_leading_per_degree = 0.0;  // max log|a_{n,d_n}| / d_n
  std::vector<RegularityViolation> violations;
};

RegularityReport validate_regularity(const SequenceSpec& spec, int horizon);

// Constants read off the witnesses: A1 = min lead, A2 = max ratio (1 when
// there are no lower coefficients), A3 = max(witness, 1e-3).
RegularityConstants constants_from_witnesses(const RegularityReport& report);

// Smallest R > 1 + A2 with A1 R (1 - A2/(R - 1)) > 2, taken as the larger
// root of A1 R^2 - (A1 (1 + A2) + 2) R + 2 = 0 and nudged upward until the
// inequality holds strictly.
double escape_radius(double A1, double A2);

struct TowerOptions {
  int materialization_cap = kDefaultCompositionCap;
  // Exact compositions are cached eagerly up to this degree and computed
  // on request (uncached) up to materialization_cap.
  int exact_cache_cap = 256;
  int generator_levels = 160;
  std::optional<double> escape_radius;
};

// Compositions F_k = f_k o ... o f_1 with cumulative degrees
// D_k = d_1 ... d_k. Immutable once constructed.
class CompositionTower {
 public:
  explicit CompositionTower(SequenceSpec spec, TowerOptions options = {});

  const SequenceSpec& spec() const { return spec_; }
  const TowerOptions& options() const { return options_; }

  // Number of generators held in memory; tower_eval and green may not go
  // deeper than this.
  int levels() const { return static_cast<int>(generators_.size()); }
  const Generator& generator(int n) const;

  // Largest k with F_k expanded in complex<double> (finite coefficients and
  // degree within the cap).
  int materialized_levels() const {
    return static_cast<int>(composed_.size());
  }
  const Polynomial<Complex>& composed(int k) const;

  bool exact() const { return exact_; }
  Polynomial<Rational> composed_exact(int k) const;

  // D_k, with D_0 = 1.
  const BigInt& cumulative_degree(int k) const;
  double inverse_cumulative_degree(int k) const;

  // sum_{j <= k} log|a_{j,d_j}| / D_j; log|lead F_k| = D_k times this.
  double log_leading_sum(int k) const;

  double escape_radius() const { return escape_radius_; }

  CompositionTower shifted(int k) const;

 private:
  SequenceSpec spec_;
  TowerOptions options_;
  std::vector<Generator> generators_;
  std::vector<BigInt> cumulative_degrees_;
  std::vector<double> inverse_degrees_;
  std::vector<double> log_leading_sums_;
  std::vector<Polynomial<Complex>> composed_;
  std::vector<Polynomial<Rational>> exact_composed_;
  bool exact_ = false;
  double escape_radius_ = 0.0;
};

// Above this modulus the orbit is tracked as log w.
inline constexpr double kLogScaleThreshold = 1e6;
inline constexpr int kDefaultGreenLevels = 60;

// State of an orbit w = F_k(z). While |w| <= kLogScaleThreshold `value` is
// authoritative; afterwards only `log_value` is.
struct TowerPoint {
  Complex value{0.0, 0.0};
  Complex log_value{0.0, 0.0};
  bool log_scale = false;
  int level = 0;
  std::optional<int> escaped_at;  // first level with |F_k(z)| > R

  double log_abs() const;
};

TowerPoint tower_start(Complex z);

// Applies one generator to the orbit state, switching to log tracking when
// the modulus passes kLogScaleThreshold.
void advance(const Generator& f, TowerPoint& state, double escape_radius);

TowerPoint tower_eval(const CompositionTower& tower, Complex z, int k);

// F_k(z) and F_k'(z) by the chain rule along the tower (no expansion).
// Throws NumericalError if the orbit leaves double range.
std::pair<Complex, Complex> tower_eval_with_derivative(
    const CompositionTower& tower, Complex z, int k);

struct CapacityResult {
  double value = 0.0;
  double tail_bound = 0.0;
  int levels = 0;
};

// exp(-sum_j log|a_{j,d_j}| / D_j), truncated once the tail bound
// (A3 + max(0, -log A1)/2) * 2 / D_k drops below tol.
CapacityResult capacity(const CompositionTower& tower, double tol = 1e-12);

struct GreenResult {
  double value = 0.0;
  int level_used = 0;
  double error_estimate = 0.0;
  bool escaped = false;
};

// (1/D_K) log|F_K(z)| at the deepest level K <= k_max when the orbit escapes;
// 0 with escaped = false when it stays within the escape radius up to k_max
// ("bounded up to k_max", not a membership claim).
GreenResult green(const CompositionTower& tower, Complex z,
                  int k_max = kDefaultGreenLevels);

// Same, starting from an orbit state of the tower's level 0.
GreenResult green_from_state(const CompositionTower& tower, TowerPoint state,
                             int k_max = kDefaultGreenLevels);

// |G(z) - G_k(F_k(z)) / D_k| with G_k the Green function of the shifted
// sequence. Throws PreconditionError if z does not escape.
double green_functional_check(const CompositionTower& tower, Complex z, int k);

}  // namespace gjulia

#endif  // GJULIA_SEQUENCE_HPP_
