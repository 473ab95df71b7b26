#ifndef GJULIA_REAL_JULIA_HPP_
#define GJULIA_REAL_JULIA_HPP_

#include <optional>
#include <string>
#include <vector>

#include "gjulia/measure.hpp"
#include "gjulia/polynomial.hpp"
#include "gjulia/sequence.hpp"

namespace gjulia {

struct PropertyA {
  bool preimage_containment = false;  // f^{-1}([-1,1]) inside [-1,1]
  bool endpoint_mapping = false;      // f({-1,1}) inside {-1,1}
  bool symmetric_zeros = false;       // f even or odd

  bool all() const {
    return preimage_containment && endpoint_mapping && symmetric_zeros;
  }
};

struct AdmissibilityReport {
  std::vector<double> zeros;     // sorted
  std::vector<double> extrema;   // sorted critical points
  std::vector<double> extremal_values;  // |f(y_i)|
  bool admissible = false;
  PropertyA property_A;
  std::string witness;  // why the polynomial is not admissible
};

// Real simple zeros, simple critical points and |f(y_i)| > 1 at every
// critical point. Zero counts are verified by sign alternation, and by a
// Sturm sequence when exact coefficients are available.
AdmissibilityReport admissibility(const Generator& f);

// Report for g2 o g1. Both inputs must be admissible with property (A); a
// composition failing the check signals numerical trouble (NumericalError).
AdmissibilityReport compose_admissible(const Generator& g1,
                                       const Generator& g2);

// Number of distinct real roots of p, by Sturm's theorem.
int sturm_distinct_real_roots(const Polynomial<Rational>& p);

struct Interval {
  long double a = 0;
  long double b = 0;
  long double length() const { return b - a; }
};

// Components of F_n^{-1}([-1,1]) in increasing order. parent[j] is the index
// of the level n-1 interval containing interval j; gaps[j] lies between
// intervals j and j+1.
struct BasicIntervalLevel {
  int n = 0;
  std::vector<Interval> intervals;
  std::vector<int> parent;
  std::vector<Interval> gaps;
};

struct BasicIntervalSystem {
  std::vector<BasicIntervalLevel> levels;  // levels[n] for n = 0..N
};

inline constexpr std::size_t kDefaultIntervalCap = std::size_t{1} << 16;

// Levels 0..n. Every f_1..f_n must be admissible with property (A).
BasicIntervalSystem basic_intervals(const CompositionTower& tower, int n,
                                    std::size_t cap = kDefaultIntervalCap);

// F_n(x) in long double along the tower.
long double tower_eval_real(const CompositionTower& tower, long double x,
                            int n);

struct CantorLevel {
  int n = 0;
  std::size_t count = 0;
  double max_length = 0;
  double total_length = 0;
  std::optional<double> min_gap;
  // max_j |m(I_j) D_n - 1| for a supplied measure, by real part of the points.
  std::optional<double> mass_deviation;
};

struct CantorReport {
  std::vector<CantorLevel> levels;
  bool max_length_decreasing = true;
  bool total_length_nonincreasing = true;
};

CantorReport cantor_diagnostics(const BasicIntervalSystem& system,
                                const DiscreteMeasure* measure = nullptr);

}  // namespace gjulia

#endif  // GJULIA_REAL_JULIA_HPP_
