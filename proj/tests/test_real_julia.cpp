#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "generators.hpp"
#include "gjulia/errors.hpp"
#include "gjulia/real_julia.hpp"

using namespace gjulia;
using gjulia::testing::Gen;

namespace {

Generator real_poly(std::initializer_list<Rational> c) {
  return Generator::from_exact(Polynomial<Rational>(c));
}

Generator k1(Rational gamma) {
  const Rational s = 1 / (2 * gamma);
  return real_poly({1 - s, 0, s});
}

// All x with F_n(x) = t for the k1 family: f_j(x) = t  <=>  x = +-sqrt(1 - 2 gamma_j (1 - t)).
std::vector<long double> k1_preimages(const std::vector<long double>& gamma, int n, long double t) {
  std::vector<long double> set{t};
  for (int j = n; j >= 1; --j) {
    std::vector<long double> next;
    for (long double y : set) {
      const long double v = std::sqrt(1 - 2 * gamma[j - 1] * (1 - y));
      next.push_back(v);
      next.push_back(-v);
    }
    set = next;
  }
  std::sort(set.begin(), set.end());
  return set;
}

}  // namespace

TEST_CASE("admissibility") {
  auto r = admissibility(k1(Rational(1, 5)));
  CHECK(r.admissible);
  REQUIRE(r.zeros.size() == 2);
  CHECK(r.zeros[0] == doctest::Approx(-std::sqrt(0.6)));
  CHECK(r.zeros[1] == doctest::Approx(std::sqrt(0.6)));
  REQUIRE(r.extrema.size() == 1);
  CHECK(r.extrema[0] == 0.0);
  CHECK(r.extremal_values[0] == 1.5);
  CHECK(r.property_A.all());

  auto t2 = admissibility(real_poly({-1, 0, 2}));
  CHECK_FALSE(t2.admissible);
  CHECK(t2.extremal_values[0] == 1.0);

  auto none = admissibility(real_poly({1, 0, 1}));
  CHECK_FALSE(none.admissible);
  CHECK(none.witness.find("complex zero") == 0);

  // Odd cubic with extremal values exactly +-2.
  auto cubic = admissibility(real_poly({0, -3, 4}));  // T_3
  CHECK_FALSE(cubic.admissible);
  auto stretched = admissibility(real_poly({0, -Rational(15, 4), 0, 5}));
  CHECK(stretched.admissible);
  CHECK_FALSE(stretched.property_A.endpoint_mapping);
  CHECK(stretched.property_A.symmetric_zeros);
}

TEST_CASE("sturm count") {
  CHECK(sturm_distinct_real_roots(Polynomial<Rational>{-1, 0, 1}) == 2);
  CHECK(sturm_distinct_real_roots(Polynomial<Rational>{1, 0, 1}) == 0);
  CHECK(sturm_distinct_real_roots(Polynomial<Rational>{1, -2, 1}) == 1);
  CHECK(sturm_distinct_real_roots(Polynomial<Rational>{2, 0, -4, 0, 1}) == 4);
}

TEST_CASE("compose_admissible") {
  auto g = k1(Rational(1, 5));
  auto r = compose_admissible(g, g);
  CHECK(r.admissible);
  CHECK(r.zeros.size() == 4);
  CHECK(r.extrema.size() == 3);
  CHECK(compose_admissible(g, k1(Rational(11, 50))).admissible);
  CHECK_THROWS_AS(compose_admissible(real_poly({-1, 0, 2}), g), PreconditionError);
}

TEST_CASE("property: composition preserves admissibility") {
  Gen gen(71);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = k1(Rational(gen.integer(5, 24), 100));
    auto b = k1(Rational(gen.integer(5, 24), 100));
    auto r = compose_admissible(a, b);
    REQUIRE(r.admissible);
    REQUIRE(r.property_A.all());
  }
}

TEST_CASE("basic intervals, small levels") {
  CompositionTower tower(SequenceSpec::autonomous(k1(Rational(1, 5))));
  auto sys = basic_intervals(tower, 2);
  REQUIRE(sys.levels.size() == 3);
  CHECK(sys.levels[0].intervals.size() == 1);
  CHECK(sys.levels[0].intervals[0].a == -1.0L);
  const auto& one = sys.levels[1].intervals;
  REQUIRE(one.size() == 2);
  CHECK(static_cast<double>(one[0].a) == -1.0);
  CHECK(static_cast<double>(one[0].b) == doctest::Approx(-std::sqrt(0.2)).epsilon(1e-15));
  CHECK(static_cast<double>(one[1].length()) == doctest::Approx(1 - std::sqrt(0.2)).epsilon(1e-15));
  const auto& two = sys.levels[2].intervals;
  REQUIRE(two.size() == 4);
  CHECK(two.front().a == -1.0L);
  CHECK(two.back().b == 1.0L);

  CHECK_THROWS_AS(basic_intervals(CompositionTower(SequenceSpec::autonomous(k1(Rational(1, 4)))), 2),
                  PreconditionError);
}

TEST_CASE("basic intervals match nested radicals") {
  std::vector<long double> gamma{0.2L, 0.15L, 0.22L, 0.1L, 0.24L, 0.2L};
  std::vector<Generator> gens;
  for (auto g : {Rational(1, 5), Rational(3, 20), Rational(11, 50), Rational(1, 10), Rational(6, 25),
                 Rational(1, 5)})
    gens.push_back(k1(g));
  CompositionTower tower(SequenceSpec::from_list(gens, TailRule::kRepeatLast));
  auto sys = basic_intervals(tower, 6);
  for (int n = 1; n <= 6; ++n) {
    auto plus = k1_preimages(gamma, n, 1), minus = k1_preimages(gamma, n, -1);
    std::vector<long double> ends = plus;
    ends.insert(ends.end(), minus.begin(), minus.end());
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    const auto& I = sys.levels[n].intervals;
    REQUIRE(ends.size() == 2 * I.size());
    for (std::size_t j = 0; j < I.size(); ++j) {
      REQUIRE(std::abs(I[j].a - ends[2 * j]) < 1e-15L);
      REQUIRE(std::abs(I[j].b - ends[2 * j + 1]) < 1e-15L);
    }
  }
}

TEST_CASE("property: interval invariants up to level 10") {
  CompositionTower tower(SequenceSpec::autonomous(k1(Rational(1, 5))));
  auto sys = basic_intervals(tower, 10);
  for (int n = 1; n <= 10; ++n) {
    const auto& level = sys.levels[n];
    const auto& prev = sys.levels[n - 1];
    REQUIRE(level.intervals.size() == (std::size_t{1} << n));
    for (std::size_t j = 0; j < level.intervals.size(); ++j) {
      const auto& I = level.intervals[j];
      REQUIRE(I.a < I.b);
      if (j + 1 < level.intervals.size()) REQUIRE(I.b < level.intervals[j + 1].a);
      // Endpoint residuals.
      REQUIRE(std::abs(std::abs(tower_eval_real(tower, I.a, n)) - 1) < 1e-10L);
      REQUIRE(std::abs(std::abs(tower_eval_real(tower, I.b, n)) - 1) < 1e-10L);
      // Exactly one sign change of F_n.
      REQUIRE(tower_eval_real(tower, I.a, n) * tower_eval_real(tower, I.b, n) < 0);
      // Nesting with shared outer endpoints.
      const auto& P = prev.intervals[level.parent[j]];
      REQUIRE(P.a <= I.a);
      REQUIRE(I.b <= P.b);
      if (j % 2 == 0) REQUIRE(I.a == P.a);
      if (j % 2 == 1) REQUIRE(I.b == P.b);
      REQUIRE(level.parent[j] == static_cast<int>(j / 2));
    }
  }
}

TEST_CASE("property: symmetry about zero") {
  CompositionTower tower(SequenceSpec::from_list({k1(Rational(1, 5)), k1(Rational(1, 8))},
                                                 TailRule::kRepeatCycle));
  auto sys = basic_intervals(tower, 8);
  const auto& I = sys.levels[8].intervals;
  for (std::size_t j = 0; j < I.size(); ++j)
    REQUIRE(std::abs(I[j].a + I[I.size() - 1 - j].b) < 1e-15L);
}

TEST_CASE("escape outside [-1,1]") {
  CompositionTower tower(SequenceSpec::autonomous(k1(Rational(1, 5))));
  Gen gen(73);
  for (double eps : {0.01, 0.1}) {
    for (int i = 0; i < 50; ++i) {
      const Complex z = std::polar(1 + eps, gen.uniform(-3.14159, 3.14159));
      REQUIRE(std::abs(evaluate(tower.generator(1).numeric, z)) > 1 + 2 * eps);
    }
  }
  auto sys = basic_intervals(tower, 5);
  for (const auto& H : sys.levels[5].gaps) {
    const double mid = static_cast<double>((H.a + H.b) / 2);
    REQUIRE(tower_eval(tower, Complex(mid), 60).escaped_at);
  }
  for (const auto& I : sys.levels[5].intervals) {
    REQUIRE_FALSE(tower_eval(tower, Complex(static_cast<double>(I.a)), 15).escaped_at);
    REQUIRE_FALSE(tower_eval(tower, Complex(static_cast<double>(I.b)), 15).escaped_at);
  }
}

TEST_CASE("cantor diagnostics") {
  CompositionTower tower(SequenceSpec::autonomous(k1(Rational(1, 5))));
  auto sys = basic_intervals(tower, 8);
  auto report = cantor_diagnostics(sys);
  CHECK(report.max_length_decreasing);
  CHECK(report.total_length_nonincreasing);
  CHECK(report.levels.size() == 9);
  CHECK(report.levels[8].min_gap);

  // Nearly Chebyshev: the total length hardly shrinks.
  CompositionTower thin(SequenceSpec::autonomous(k1(Rational(1, 4) - Rational(1, 1000000))));
  auto near = cantor_diagnostics(basic_intervals(thin, 8));
  CHECK(near.levels[8].total_length > 0.99 * near.levels[1].total_length);

  auto single = cantor_diagnostics(basic_intervals(tower, 0));
  CHECK(single.levels.size() == 1);
  CHECK_FALSE(single.levels[0].min_gap);
}

TEST_CASE("measure per basic interval") {
  for (Rational g : {Rational(1, 5), Rational(3, 20)}) {
    CompositionTower tower(SequenceSpec::autonomous(k1(g)));
    auto m = preimage_measure(tower, default_anchor(tower), 12);
    auto report = cantor_diagnostics(basic_intervals(tower, 6), &m);
    for (const auto& level : report.levels) REQUIRE(*level.mass_deviation <= 0.02);
  }
}
