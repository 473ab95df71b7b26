// Acceptance run: one PASS/FAIL line per criterion, with runtime against its
// budget. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "generators.hpp"
#include "gjulia/k1_gamma.hpp"
#include "gjulia/measure.hpp"
#include "gjulia/orthopoly.hpp"
#include "gjulia/real_julia.hpp"
#include "gjulia/roots.hpp"
#include "gjulia/sequence.hpp"

using namespace gjulia;
using gjulia::testing::Gen;

namespace {

// Collects sub-check outcomes for one criterion.
struct Checks {
  bool ok = true;
  std::string detail;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

Generator real_poly(std::initializer_list<Rational> c) {
  return Generator::from_exact(Polynomial<Rational>(c));
}

Generator k1(const Rational& gamma) {
  const Rational s = 1 / (2 * gamma);
  return real_poly({1 - s, 0, s});
}

CompositionTower chebyshev() { return CompositionTower(SequenceSpec::autonomous(k1(Rational(1, 4)))); }
CompositionTower squares() { return CompositionTower(SequenceSpec::autonomous(real_poly({0, 0, 1}))); }
CompositionTower z2_minus_2() { return CompositionTower(SequenceSpec::autonomous(real_poly({-2, 0, 1}))); }

GammaSequence random_gammas(Gen& gen, int count, GammaTail tail) {
  std::vector<Rational> g;
  for (int i = 0; i < count; ++i) g.push_back(Rational(gen.integer(50, 250), 1000));
  return GammaSequence::from_list(g, tail);
}

// G for [-1, 1]: log|z + sqrt(z^2 - 1)| with the branch outside the interval.
double interval_green(Complex z) {
  Complex s = std::sqrt(z * z - 1.0);
  if (std::abs(z + s) < 1) s = -s;
  return std::log(std::abs(z + s));
}

Checks capacity_oracle() {
  Checks c;
  const double cheb = capacity(chebyshev()).value;
  c.expect(std::abs(cheb - 0.5) < 1e-10, "gamma=1/4 capacity " + fmt(cheb));
  const double sq = capacity(squares()).value;
  c.expect(sq == 1.0, "z^2 capacity " + fmt(sq));
  const double m2 = capacity(z2_minus_2()).value;
  c.expect(std::abs(m2 - 1) < 1e-10, "z^2-2 capacity " + fmt(m2));
  return c;
}

Checks green_oracle() {
  Checks c;
  auto tower = squares();
  Gen gen(1001);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const Complex z = gen.point_in_annulus(1.1, 10.0);
    worst = std::max(worst, std::abs(green(tower, z).value - std::log(std::abs(z))));
  }
  c.expect(worst < 1e-12, "z^2 max error " + fmt(worst));
  // The stated target for gamma = 1/4 is log(2 + sqrt 3) - log 2.
  const double g2 = green(chebyshev(), Complex(2.0)).value;
  const double stated = std::log(2 + std::sqrt(3.0)) - std::log(2.0);
  c.expect(std::abs(g2 - stated) < 1e-8,
           "gamma=1/4 green(2) = " + fmt(g2) + " vs stated " + fmt(stated) +
               " (closed form log(2+sqrt3) = " + fmt(std::log(2 + std::sqrt(3.0))) + ")");
  return c;
}

Checks moment_suite() {
  Checks c;
  const auto mt = moments(chebyshev(), 3, Precision::parse("rational"));
  c.expect(mt.exact.has_value(), "no exact table");
  if (!mt.exact) return c;
  const auto& e = *mt.exact;
  c.expect(e[2] == Rational(1, 2) && e[4] == Rational(3, 8) && e[6] == Rational(5, 16),
           "exact c_2, c_4, c_6 = " + to_string(e[2]) + ", " + to_string(e[4]) + ", " + to_string(e[6]));
  // T_8 from the three-term recurrence, zeros by companion eigenvalues.
  Polynomial<Complex> t0{Complex(1)}, t1{Complex(0), Complex(1)};
  const Polynomial<Complex> two_z{Complex(0), Complex(2)};
  for (int n = 1; n < 8; ++n) {
    Polynomial<Complex> next = two_z * t1 + t0 * Complex(-1);
    t0 = t1;
    t1 = next;
  }
  const auto zeros = polynomial_roots(t1);
  double worst = 0;
  for (int k = 0; k < 8; ++k) {
    Complex s(0);
    for (Eigen::Index i = 0; i < zeros.size(); ++i) s += std::pow(zeros(i), k);
    worst = std::max(worst, std::abs(s / 8.0 - Complex(to_double(e[k]))));
  }
  c.expect(worst < 1e-10, "brute-force power sums differ by " + fmt(worst));
  return c;
}

Checks jacobi_suite() {
  Checks c;
  const auto jc = jacobi_from_moments(moments(chebyshev(), 4, Precision::parse("rational")), 6);
  c.expect(jc.a2_exact && jc.b_exact, "exact mode not used");
  if (jc.a2_exact) {
    for (int n = 0; n < 6; ++n) c.expect((*jc.b_exact)[n] == 0, "b_" + std::to_string(n + 1) + " != 0");
    c.expect((*jc.a2_exact)[0] == Rational(1, 2), "a_1^2 = " + to_string((*jc.a2_exact)[0]));
    for (int n = 1; n < 6; ++n)
      c.expect(jc.a_exact[n] && *jc.a_exact[n] == Rational(1, 2), "a_" + std::to_string(n + 1) + " != 1/2");
  }
  const auto jf = jacobi_from_moments(moments(z2_minus_2(), 4, Precision::parse("f64")), 6);
  c.expect(std::abs(jf.a2[0] - 2) < 1e-10, "z^2-2 a_1^2 = " + fmt(jf.a2[0]));
  for (int n = 1; n < 6; ++n)
    c.expect(std::abs(jf.a[n] - 1) < 1e-10, "z^2-2 a_" + std::to_string(n + 1) + " = " + fmt(jf.a[n]));
  return c;
}

Checks explicit_orthogonality() {
  Checks c;
  Gen gen(1005);
  int sequences = 0;
  while (sequences < 10) {
    std::vector<Generator> list;
    for (int i = 0; i < 3; ++i) {
      const Rational lead = Rational(gen.integer(0, 1) ? 1 : -1) * Rational(gen.integer(2, 6), 2);
      list.push_back(real_poly({gen.rational(1), gen.rational(1), lead}));
    }
    const auto spec = SequenceSpec::from_list(std::move(list), TailRule::kRepeatCycle);
    if (!validate_regularity(spec, 3).ok || spec.constants().A1 < 1) continue;
    ++sequences;
    CompositionTower tower(spec);
    const auto P = explicit_P_block(tower, 2);
    std::vector<double> worst;
    for (int m = 6; m <= 10; ++m) {
      const auto measure = preimage_measure(tower, default_anchor(tower), m);
      const auto r = orthogonality_residual(P.numeric, measure, P.index - 1);
      worst.push_back(*std::max_element(r.begin(), r.end()));
    }
    c.expect(worst.back() < 1e-3, "residual at m=10 is " + fmt(worst.back()));
    // Below 1e-12 the residual is roundoff around an exact zero.
    for (std::size_t i = 1; i < worst.size(); ++i)
      c.expect(worst[i] <= std::max(2 * worst[i - 1], 1e-12),
               "residual rose from " + fmt(worst[i - 1]) + " to " + fmt(worst[i]));
  }
  return c;
}

Checks measure_convergence() {
  Checks c;
  auto tower = z2_minus_2();
  const auto m = preimage_measure(tower, default_anchor(tower), 12);
  std::vector<double> xs;
  for (Eigen::Index i = 0; i < m.points.size(); ++i) xs.push_back(m.points(i).real());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double ks = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = 0.5 + std::asin(std::clamp(xs[i] / 2, -1.0, 1.0)) / std::numbers::pi;
    ks = std::max({ks, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
  }
  c.expect(ks < 0.02, "Kolmogorov distance " + fmt(ks));
  return c;
}

Checks interval_geometry() {
  Checks c;
  Gen gen(1007);
  const long double half_pi2 = std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 2;
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto gs = random_gammas(gen, 20, GammaTail::kFinite);
    for (int n = 1; n <= 20; ++n) {
      const long double l = first_interval_length(gs, n);
      const long double delta = std::exp(gs.log_delta(n));
      if (!(2 * delta <= l * (1 + 1e-12L) && l <= half_pi2 * delta * (1 + 1e-12L))) ++violations;
    }
  }
  c.expect(violations == 0, std::to_string(violations) + " length-bound violations");

  CompositionTower tower(SequenceSpec::autonomous(k1(Rational(1, 5))));
  const auto sys = basic_intervals(tower, 10);
  int bad = 0;
  for (int n = 1; n <= 10; ++n) {
    const auto& level = sys.levels[n];
    if (level.intervals.size() != (std::size_t{1} << n)) ++bad;
    for (std::size_t j = 0; j < level.intervals.size(); ++j) {
      const auto& I = level.intervals[j];
      const auto& P = sys.levels[n - 1].intervals[level.parent[j]];
      if (!(P.a <= I.a && I.b <= P.b && I.a < I.b)) ++bad;
      if (j + 1 < level.intervals.size() && !(I.b < level.intervals[j + 1].a)) ++bad;
      for (long double x : {I.a, I.b})
        if (std::abs(std::abs(tower_eval_real(tower, x, n)) - 1) >= 1e-10L) ++bad;
    }
  }
  c.expect(bad == 0, std::to_string(bad) + " nesting/residual failures");
  return c;
}

Checks density_bracket() {
  Checks c;
  auto tower = chebyshev();
  const auto m = preimage_measure(tower, default_anchor(tower), 14);
  for (double r : {0.01, 0.001}) {
    double sup = 0;
    for (int i = 0; i < 720; ++i)
      sup = std::max(sup, interval_green(Complex(1.0) + std::polar(r, 2 * std::numbers::pi * i / 720)));
    const auto b = density_integral(m, Complex(1.0), r);
    c.expect(b.lower <= sup && sup <= b.upper,
             "r=" + fmt(r) + ": sup G " + fmt(sup) + " not in [" + fmt(b.lower) + ", " + fmt(b.upper) + "]");
  }
  return c;
}

Checks pw_behavior() {
  Checks c;
  // eps_n = 4^{-(n+1)} and (n+2)^{-2}: index-shifted so that gamma_1 > 0.
  const auto geo = GammaSequence::epsilon_geometric(Rational(1, 4), Rational(1, 4));
  const auto inv = GammaSequence::epsilon_power(1, 2.0, 2);
  const auto conv = pw_sum(geo, 25);
  const auto div = pw_sum(inv, 25);
  const double conv_gap = conv.partial_sums[24] - conv.partial_sums[19];
  const double div_gap = div.partial_sums[24] - div.partial_sums[19];
  c.expect(conv_gap < 1e-4, "geometric S_25 - S_20 = " + fmt(conv_gap));
  c.expect(div_gap > 10 * conv_gap, "power S_25 - S_20 = " + fmt(div_gap) + " vs " + fmt(conv_gap));
  c.expect(conv.verdict_hint == PWHint::kConvergent, "geometric hint");
  c.expect(div.verdict_hint == PWHint::kDivergent, "power hint");
  for (const auto* pw : {&conv, &div})
    for (bool ok : pw->lower_bound_ok) c.expect(ok, "s_n > 2 eps_n violated");
  return c;
}

Checks resolvent_suite() {
  Checks c;
  auto cheb = chebyshev();
  const auto mc = moments(cheb, 6);
  const double Mc = support_bound(cheb);
  const auto r = resolvent(mc, Complex(2.0), Mc, 40);
  c.expect(std::abs(r.value + 1 / std::sqrt(3.0)) < 1e-8, "R(2) = " + fmt(r.value.real()));

  auto z22 = z2_minus_2();
  const auto mz = moments(z22, 6);
  const double Mz = support_bound(z22);
  const double fz = resolvent_functional_check(z22, mz, mz, Complex(3.0), 1, Mz, Mz, 40);
  c.expect(fz < 1e-6, "z^2-2 functional residual " + fmt(fz));
  const auto shifted = cheb.shifted(1);
  const double fc = resolvent_functional_check(cheb, mc, moments(shifted, 6), Complex(2.0), 1, Mc,
                                               support_bound(shifted));
  c.expect(fc < 1e-6, "gamma=1/4 functional residual " + fmt(fc));

  Gen gen(1010);
  const double h = 1e-5;
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    const Complex z = gen.point_in_annulus(2.0, 4.0);
    const double gx = (green(cheb, z + h).value - green(cheb, z - h).value) / (2 * h);
    const double gy = (green(cheb, z + Complex(0, h)).value - green(cheb, z - Complex(0, h)).value) / (2 * h);
    const Complex R = resolvent(mc, z, Mc).value;
    worst = std::max(worst, std::abs(Complex(gx, -gy) + R) / std::abs(R));
  }
  c.expect(worst < 1e-4, "2dG + R relative " + fmt(worst));
  return c;
}

Checks cross_module() {
  Checks c;
  auto cheb = chebyshev();
  const auto jc = jacobi_from_moments(moments(cheb, 4), 6);
  const auto P = monic_from_jacobi_exact(jc, 4);
  const auto block = explicit_P_block(cheb, 2);
  c.expect(block.exact && P[4] == *block.exact, "P_4 differs from the Hankel reconstruction");
  Gen gen(1011);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto gs = random_gammas(gen, gen.integer(1, 5), GammaTail::kRepeatCycle);
    worst = std::max(worst, std::abs(capacity_closed_form(gs).value -
                                     capacity(CompositionTower(gs.to_spec())).value));
  }
  c.expect(worst < 1e-10, "closed-form vs generic capacity " + fmt(worst));
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Checks()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "capacity oracle", 1, capacity_oracle},
      {2, "green oracle", 1, green_oracle},
      {3, "moment suite", 1, moment_suite},
      {4, "jacobi suite", 5, jacobi_suite},
      {5, "explicit orthogonality", 30, explicit_orthogonality},
      {6, "measure convergence", 10, measure_convergence},
      {7, "interval geometry", 10, interval_geometry},
      {8, "density bracket", 20, density_bracket},
      {9, "parreau-widom behavior", 30, pw_behavior},
      {10, "resolvent", 5, resolvent_suite},
      {11, "cross-module consistency", 5, cross_module},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Checks result;
    try {
      result = cr.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > cr.budget) result.expect(false, "over the " + fmt(cr.budget) + " s budget");
    if (!result.ok) ++failed;
    std::printf("%s criterion %d: %s (%.2f s / %.0f s)%s%s\n", result.ok ? "PASS" : "FAIL", cr.id, cr.name,
                secs, cr.budget, result.ok ? "" : "  ", result.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
