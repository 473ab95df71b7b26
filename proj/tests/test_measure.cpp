#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "generators.hpp"
#include "gjulia/errors.hpp"
#include "gjulia/measure.hpp"

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

double arcsine_cdf(double x, double half_width) {
  x = std::clamp(x / half_width, -1.0, 1.0);
  return 0.5 + std::asin(x) / std::numbers::pi;
}

double kolmogorov_distance(const DiscreteMeasure& m, double half_width) {
  std::vector<double> xs;
  for (Eigen::Index i = 0; i < m.points.size(); ++i) xs.push_back(m.points(i).real());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = arcsine_cdf(xs[i], half_width);
    worst = std::max({worst, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
  }
  return worst;
}

}  // namespace

TEST_CASE("check_anchor") {
  RegularityConstants c{1, 1, 1};
  auto four = check_anchor(c, Complex(4.0));
  CHECK(four.satisfied);
  CHECK(four.margin == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(check_anchor(c, Complex(3.0)).satisfied);
  CHECK_FALSE(check_anchor(c, Complex(1.0)).satisfied);
  CHECK_FALSE(check_anchor(c, Complex(0.5, 0.5)).satisfied);
}

TEST_CASE("preimage_measure of z^2") {
  CompositionTower tower(SequenceSpec::autonomous(real_poly({0, 0, 1})));
  auto m = preimage_measure(tower, Complex(16.0), 2);
  REQUIRE(m.size() == 4);
  CHECK(m.weight == Rational(1, 4));
  CHECK(m.total_mass() == 1);
  const Complex expected[] = {{-2, 0}, {0, -2}, {0, 2}, {2, 0}};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(m.points(i) - expected[i]) < 1e-14);
  CHECK_THROWS_AS(preimage_measure(tower, Complex(2.0), 2), PreconditionError);
}

TEST_CASE("mean of the preimage measure") {
  // f = z^2 - 2z + 1/10: roots of f = beta always sum to 2.
  CompositionTower tower(SequenceSpec::autonomous(real_poly({Rational(1, 10), -2, 1})));
  const Complex a = default_anchor(tower);
  for (int k = 1; k <= 3; ++k) {
    auto m = preimage_measure(tower, a, k);
    CHECK(std::abs(discrete_moment(m, 1) - 1.0) < 1e-12);
  }
}

TEST_CASE("arcsine distribution for z^2 - 2") {
  CompositionTower tower(SequenceSpec::autonomous(real_poly({-2, 0, 1})));
  auto m = preimage_measure(tower, default_anchor(tower), 12);
  CHECK(m.size() == 4096);
  CHECK(kolmogorov_distance(m, 2.0) < 0.02);
}

TEST_CASE("property: mass, confinement and root residuals") {
  Gen gen(31);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<ComplexRational> c;
    for (int j = 0; j < 3; ++j) c.push_back({gen.rational(1), gen.rational(1)});
    CompositionTower tower(SequenceSpec::quadratic_c(c, TailRule::kRepeatCycle));
    const Complex a = default_anchor(tower) * std::polar(1.0, gen.uniform(-3, 3));
    const int k = gen.integer(1, 10);
    auto m = preimage_measure(tower, a, k);
    REQUIRE(m.total_mass() == 1);
    REQUIRE(m.size() == (std::size_t{1} << k));
    REQUIRE(support_radius(m) <= std::abs(a));
    REQUIRE(preimage_residual(tower, m) < 1e-6);
  }
}

TEST_CASE("property: low moments do not depend on the anchor") {
  // Both equal s_j(F_l)/D_l for j <= D_l - 1 once k > l.
  Gen gen(37);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<ComplexRational> c;
    for (int j = 0; j < 4; ++j) c.push_back({gen.rational(1), 0});
    CompositionTower tower(SequenceSpec::quadratic_c(c, TailRule::kRepeatCycle));
    const Complex a = default_anchor(tower);
    auto m1 = preimage_measure(tower, a, 4);
    auto m2 = preimage_measure(tower, a * Complex(0.6, 1.3), 4);
    for (int j = 0; j <= 7; ++j)
      REQUIRE(std::abs(discrete_moment(m1, j) - discrete_moment(m2, j)) < 1e-9);
  }
}

TEST_CASE("disk_mass") {
  CompositionTower tower(SequenceSpec::autonomous(real_poly({0, 0, 1})));
  auto m = preimage_measure(tower, Complex(8.0), 10);
  CHECK(disk_mass(m, Complex(0.0), 2.0) == 1.0);
  CHECK(disk_mass(m, Complex(50.0), 1.0) == 0.0);
  // Points sit on the circle of radius 8^{1/1024}; mass near 1 is the arc fraction.
  const double rho = std::pow(8.0, 1.0 / 1024);
  for (double t : {0.05, 0.1, 0.3}) {
    const double half_angle = std::acos((rho * rho + 1 - t * t) / (2 * rho));
    CHECK(disk_mass(m, Complex(1.0), t) ==
          doctest::Approx(half_angle / std::numbers::pi).epsilon(0.02));
  }
}

TEST_CASE("density_integral") {
  CompositionTower tower(SequenceSpec::autonomous(k1(Rational(1, 4))));
  auto m = preimage_measure(tower, default_anchor(tower), 12);
  auto far = density_integral(m, Complex(5.0), 0.01);
  CHECK(far.lower == 0.0);
  CHECK(far.upper == 0.0);

  // Endpoint behavior of [-1,1]: disk mass ~ sqrt(t), so doubling r scales the
  // lower integral by about sqrt(2).
  auto a = density_integral(m, Complex(1.0), 0.01);
  auto b = density_integral(m, Complex(1.0), 0.02);
  CHECK(b.lower / a.lower == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
  CHECK(a.lower < a.upper);

  auto q = density_integral(m, Complex(1.0), 0.01, 400);
  CHECK(q.lower == doctest::Approx(a.lower).epsilon(0.02));
  CHECK_THROWS_AS(density_integral(m, Complex(1.0), 1.5), PreconditionError);
}

TEST_CASE("density bracket contains the Green maximum") {
  CompositionTower tower(SequenceSpec::autonomous(k1(Rational(1, 4))));
  auto m = preimage_measure(tower, default_anchor(tower), 12);
  const double r = 0.01;
  double sup = 0.0;
  for (int i = 0; i < 64; ++i)
    sup = std::max(sup, green(tower, Complex(1.0) + std::polar(r, 2 * std::numbers::pi * i / 64)).value);
  auto bracket = density_integral(m, Complex(1.0), r);
  CHECK(bracket.lower <= sup);
  CHECK(sup <= bracket.upper);
}
