#include "gjulia/real_julia.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gjulia/errors.hpp"
#include "gjulia/roots.hpp"

namespace gjulia {

namespace {

using LPoly = Polynomial<long double>;

constexpr double kRealTolerance = 1e-12;

LPoly to_long_double(const Generator& g) {
  if (g.exact) return g.exact->cast<long double>();
  if (!g.is_real()) throw PreconditionError("polynomial has complex coefficients");
  return g.numeric.cast<long double>();
}

long double evaluate_ld(const LPoly& p, long double x) {
  long double v = p.leading();
  for (int j = p.degree() - 1; j >= 0; --j) v = v * x + p[j];
  return v;
}

std::pair<long double, long double> evaluate_ld_slope(const LPoly& p,
                                                      long double x) {
  long double v = p.leading(), s = 0;
  for (int j = p.degree() - 1; j >= 0; --j) {
    s = s * x + v;
    v = v * x + p[j];
  }
  return {v, s};
}

int sign(long double v) { return (v > 0) - (v < 0); }

struct RealRoots {
  std::vector<long double> roots;  // sorted, Newton-polished
  std::optional<Complex> complex_witness;
  bool simple = true;
};

// Real roots of p(x) = target, verified by sign alternation of p - target.
RealRoots real_roots(const LPoly& p, long double target) {
  const LPoly q = p - target;
  Polynomial<double> qd = q.cast<double>();
  const Eigen::VectorXcd approx = real_polynomial_roots(qd);
  RealRoots out;
  double scale = 1.0;
  for (Eigen::Index i = 0; i < approx.size(); ++i)
    scale = std::max(scale, std::abs(approx(i)));
  for (Eigen::Index i = 0; i < approx.size(); ++i) {
    if (std::abs(approx(i).imag()) > 1e-7 * scale) {
      if (!out.complex_witness) out.complex_witness = approx(i);
      continue;
    }
    long double x = approx(i).real();
    for (int it = 0; it < 8; ++it) {
      auto [v, s] = evaluate_ld_slope(q, x);
      if (v == 0 || s == 0) break;
      const long double next = x - v / s;
      if (!std::isfinite(next)) break;
      x = next;
    }
    out.roots.push_back(x);
  }
  std::sort(out.roots.begin(), out.roots.end());
  // Simple real roots make q alternate in sign between them.
  const auto& r = out.roots;
  if (!r.empty()) {
    std::vector<long double> probes;
    probes.push_back(r.front() - 1);
    for (std::size_t i = 0; i + 1 < r.size(); ++i) probes.push_back((r[i] + r[i + 1]) / 2);
    probes.push_back(r.back() + 1);
    for (std::size_t i = 0; i + 1 < probes.size(); ++i)
      if (sign(evaluate_ld(q, probes[i])) * sign(evaluate_ld(q, probes[i + 1])) >= 0)
        out.simple = false;
  }
  return out;
}

std::string describe(Complex z) {
  std::ostringstream s;
  s.precision(10);
  s << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return s.str();
}

bool even_or_odd(const Generator& g) {
  bool even = true, odd = true;
  for (int j = 0; j <= g.degree(); ++j) {
    const bool zero = g.exact ? (*g.exact)[j] == 0 : g.numeric[j] == Complex(0.0);
    if (zero) continue;
    (j % 2 ? even : odd) = false;
  }
  return even || odd;
}

bool maps_to_unit(const Generator& g, int x) {
  if (g.exact) {
    const Rational v = evaluate(*g.exact, Rational(x));
    return v == 1 || v == -1;
  }
  const double v = std::abs(evaluate(g.numeric, Complex(x)));
  return std::abs(v - 1.0) <= kRealTolerance;
}

}  // namespace

int sturm_distinct_real_roots(const Polynomial<Rational>& p) {
  std::vector<Polynomial<Rational>> chain{p};
  if (p.degree() >= 1) chain.push_back(derivative(p));
  while (chain.back().degree() >= 1) {
    auto rem = divide(chain[chain.size() - 2], chain.back()).remainder;
    if (!rem) break;
    chain.push_back(*rem * Rational(-1));
  }
  auto changes = [&](bool at_plus) {
    int count = 0, last = 0;
    for (const auto& q : chain) {
      int s = q.leading() > 0 ? 1 : -1;
      if (!at_plus && q.degree() % 2) s = -s;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  };
  return changes(false) - changes(true);
}

AdmissibilityReport admissibility(const Generator& f) {
  if (f.degree() < 2) throw PreconditionError("admissibility needs degree >= 2");
  const LPoly p = to_long_double(f);
  const int n = p.degree();
  AdmissibilityReport report;

  const RealRoots zeros = real_roots(p, 0);
  for (long double x : zeros.roots) report.zeros.push_back(static_cast<double>(x));
  if (zeros.complex_witness) {
    report.witness = "complex zero " + describe(*zeros.complex_witness);
    return report;
  }
  if (!zeros.simple || static_cast<int>(zeros.roots.size()) != n) {
    report.witness = "zeros are not simple";
    return report;
  }
  if (f.exact && sturm_distinct_real_roots(*f.exact) != n) {
    report.witness = "Sturm count disagrees: zeros not all real and simple";
    return report;
  }

  const RealRoots critical = real_roots(derivative(p), 0);
  for (long double y : critical.roots) {
    report.extrema.push_back(static_cast<double>(y));
    report.extremal_values.push_back(static_cast<double>(std::abs(evaluate_ld(p, y))));
  }
  if (critical.complex_witness || !critical.simple ||
      static_cast<int>(critical.roots.size()) != n - 1) {
    report.witness = "critical points are not distinct";
    return report;
  }
  report.admissible = true;
  for (std::size_t i = 0; i < critical.roots.size(); ++i) {
    const long double y = critical.roots[i];
    long double value = std::abs(evaluate_ld(p, y));
    if (f.exact) {
      // Critical points that are exact rationals are checked exactly.
      const Rational yr(static_cast<double>(y));
      if (evaluate(derivative(*f.exact), yr) == 0) {
        const Rational v = evaluate(*f.exact, yr);
        value = abs(v).convert_to<long double>();
      }
    }
    if (!(value > 1)) {
      report.admissible = false;
      std::ostringstream s;
      s.precision(17);
      s << "|f(" << static_cast<double>(y) << ")| = " << static_cast<double>(value)
        << " is not > 1";
      report.witness = s.str();
      break;
    }
  }

  const RealRoots up = real_roots(p, 1), down = real_roots(p, -1);
  bool inside = !up.complex_witness && !down.complex_witness;
  for (const auto* set : {&up, &down})
    for (long double x : set->roots)
      if (std::abs(x) > 1 + kRealTolerance) inside = false;
  report.property_A.preimage_containment = inside && report.admissible;
  report.property_A.endpoint_mapping = maps_to_unit(f, 1) && maps_to_unit(f, -1);
  report.property_A.symmetric_zeros = even_or_odd(f);
  return report;
}

AdmissibilityReport compose_admissible(const Generator& g1,
                                       const Generator& g2) {
  for (const Generator* g : {&g1, &g2}) {
    const auto r = admissibility(*g);
    if (!r.admissible || !r.property_A.all())
      throw PreconditionError(
          "compose_admissible needs admissible inputs with property (A)" +
          (r.witness.empty() ? std::string() : ": " + r.witness));
  }
  Generator g3 = g1.exact && g2.exact
                     ? Generator::from_exact(compose(*g2.exact, *g1.exact))
                     : Generator::from_numeric(compose(g2.numeric, g1.numeric));
  auto report = admissibility(g3);
  if (!report.admissible || !report.property_A.all())
    throw NumericalError(
        "composition of admissible polynomials failed re-verification (" +
        report.witness + "); numerical root trouble");
  return report;
}

namespace {

struct RealTower {
  std::vector<LPoly> generators;

  std::pair<long double, long double> value_slope(long double x, int depth) const {
    long double v = x, s = 1;
    for (int j = 0; j < depth; ++j) {
      auto [fv, fs] = evaluate_ld_slope(generators[j], v);
      s *= fs;
      v = fv;
    }
    return {v, s};
  }
};

// Solves F_depth(x) = target on [lo, hi], where F_depth is monotone with
// F(lo) and F(hi) on opposite sides of target. Newton steps are accepted
// only inside the current bracket; otherwise the bracket is bisected.
long double solve_monotone(const RealTower& t, int depth, long double target,
                           long double lo, long double hi, bool increasing,
                           int branch) {
  long double x = (lo + hi) / 2;
  for (int it = 0; it < 400; ++it) {
    auto [v, s] = t.value_slope(x, depth);
    const long double g = increasing ? v - target : target - v;
    if (g == 0) return x;
    if (g > 0) hi = x; else lo = x;
    if (hi - lo <= 4 * std::numeric_limits<long double>::epsilon() *
                       std::max<long double>(1, std::abs(x)))
      return (lo + hi) / 2;
    long double next = x - (v - target) / s;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = (lo + hi) / 2;
    x = next;
  }
  if (hi - lo > 1e-12L)
    throw NumericalError("bracketing failed on branch " + std::to_string(branch) +
                         " at level " + std::to_string(depth + 1) +
                         "; gamma too close to the degenerate boundary");
  return (lo + hi) / 2;
}

}  // namespace

long double tower_eval_real(const CompositionTower& tower, long double x, int n) {
  long double v = x;
  for (int j = 1; j <= n; ++j) v = evaluate_ld(to_long_double(tower.generator(j)), v);
  return v;
}

BasicIntervalSystem basic_intervals(const CompositionTower& tower, int n,
                                    std::size_t cap) {
  if (n < 0) throw PreconditionError("level must be >= 0");
  if (n > tower.levels()) throw PreconditionError("level beyond the sequence length");
  if (tower.cumulative_degree(n) > BigInt(cap))
    throw PreconditionError("D_" + std::to_string(n) + " = " +
                            tower.cumulative_degree(n).str() +
                            " intervals exceed the cap " + std::to_string(cap));
  RealTower t;
  std::vector<std::vector<std::pair<long double, long double>>> pieces;
  for (int j = 1; j <= n; ++j) {
    const Generator& g = tower.generator(j);
    const auto report = admissibility(g);
    if (!report.admissible || !report.property_A.all())
      throw PreconditionError("f_" + std::to_string(j) +
                              " is not admissible with property (A)" +
                              (report.witness.empty() ? "" : ": " + report.witness));
    t.generators.push_back(to_long_double(g));
    // f_j^{-1}([-1,1]) as sorted endpoint pairs.
    const auto up = real_roots(t.generators.back(), 1);
    const auto down = real_roots(t.generators.back(), -1);
    std::vector<long double> ends = up.roots;
    ends.insert(ends.end(), down.roots.begin(), down.roots.end());
    std::sort(ends.begin(), ends.end());
    if (static_cast<int>(ends.size()) != 2 * g.degree())
      throw NumericalError("f_" + std::to_string(j) + " = +-1 lost real roots");
    std::vector<std::pair<long double, long double>> e;
    for (std::size_t i = 0; i < ends.size(); i += 2) e.push_back({ends[i], ends[i + 1]});
    pieces.push_back(std::move(e));
  }

  BasicIntervalSystem system;
  BasicIntervalLevel base;
  base.intervals.push_back({-1.0L, 1.0L});
  base.parent.push_back(-1);
  system.levels.push_back(base);
  std::vector<bool> increasing{true};

  for (int level = 1; level <= n; ++level) {
    const auto& prev = system.levels.back();
    const LPoly& f = t.generators[level - 1];
    BasicIntervalLevel next;
    next.n = level;
    std::vector<bool> next_increasing;
    int branch = 0;
    for (std::size_t p = 0; p < prev.intervals.size(); ++p) {
      const Interval parent = prev.intervals[p];
      const bool inc = increasing[p];
      // x with F_{level-1}(x) = e inside the parent; +-1 map to its endpoints.
      auto preimage = [&](long double e) {
        if (e <= -1 + 1e-18L) return inc ? parent.a : parent.b;
        if (e >= 1 - 1e-18L) return inc ? parent.b : parent.a;
        return solve_monotone(t, level - 1, e, parent.a, parent.b, inc, branch);
      };
      std::vector<Interval> children;
      std::vector<bool> orient;
      for (const auto& [lo, hi] : pieces[level - 1]) {
        const long double x1 = preimage(lo), x2 = preimage(hi);
        children.push_back({std::min(x1, x2), std::max(x1, x2)});
        const bool f_inc = evaluate_ld(f, lo) < evaluate_ld(f, hi);
        orient.push_back(inc == f_inc);
        ++branch;
      }
      if (!inc) {
        std::reverse(children.begin(), children.end());
        std::reverse(orient.begin(), orient.end());
      }
      for (std::size_t c = 0; c < children.size(); ++c) {
        next.intervals.push_back(children[c]);
        next.parent.push_back(static_cast<int>(p));
        next_increasing.push_back(orient[c]);
      }
    }
    for (std::size_t j = 0; j + 1 < next.intervals.size(); ++j)
      next.gaps.push_back({next.intervals[j].b, next.intervals[j + 1].a});
    system.levels.push_back(std::move(next));
    increasing = std::move(next_increasing);
  }
  return system;
}

CantorReport cantor_diagnostics(const BasicIntervalSystem& system,
                                const DiscreteMeasure* measure) {
  CantorReport report;
  for (const auto& level : system.levels) {
    CantorLevel row;
    row.n = level.n;
    row.count = level.intervals.size();
    for (const auto& I : level.intervals) {
      row.max_length = std::max(row.max_length, static_cast<double>(I.length()));
      row.total_length += static_cast<double>(I.length());
    }
    for (const auto& H : level.gaps) {
      const double h = static_cast<double>(H.length());
      row.min_gap = row.min_gap ? std::min(*row.min_gap, h) : h;
    }
    if (measure && !level.intervals.empty()) {
      std::vector<std::size_t> counts(level.intervals.size(), 0);
      for (Eigen::Index i = 0; i < measure->points.size(); ++i) {
        const long double x = measure->points(i).real();
        auto it = std::lower_bound(
            level.intervals.begin(), level.intervals.end(), x,
            [](const Interval& I, long double v) { return I.b < v; });
        std::size_t j = static_cast<std::size_t>(it - level.intervals.begin());
        if (j == level.intervals.size()) {
          j = level.intervals.size() - 1;
        } else if (x < it->a && j > 0 && x - level.intervals[j - 1].b < it->a - x) {
          --j;
        }
        ++counts[j];
      }
      double worst = 0.0;
      const double scale = measure->weight_value() * static_cast<double>(row.count);
      for (std::size_t c : counts)
        worst = std::max(worst, std::abs(static_cast<double>(c) * scale - 1.0));
      row.mass_deviation = worst;
    }
    if (!report.levels.empty()) {
      const auto& last = report.levels.back();
      if (!(row.max_length < last.max_length)) report.max_length_decreasing = false;
      if (row.total_length > last.total_length * (1 + 1e-12))
        report.total_length_nonincreasing = false;
    }
    report.levels.push_back(row);
  }
  return report;
}

}  // namespace gjulia
