#ifndef GJULIA_MEASURE_HPP_
#define GJULIA_MEASURE_HPP_

#include <cstddef>

#include <Eigen/Core>

#include "gjulia/scalar.hpp"
#include "gjulia/sequence.hpp"

namespace gjulia {

struct AnchorCertificate {
  Complex a;
  bool satisfied = false;
  double margin = 0.0;  // |a| A1 (1 - A2/(|a| - 1)) - 2
};

AnchorCertificate check_anchor(const RegularityConstants& constants, Complex a);

// 2 R on the positive real axis. The smallest |a| passing check_anchor is the
// escape radius boundary itself, so the maximum in the rule is always 2 R.
Complex default_anchor(const CompositionTower& tower);

// Normalized counting measure on the D_k roots of F_k(z) = a.
struct DiscreteMeasure {
  Eigen::VectorXcd points;  // sorted by (re, im)
  Complex anchor;
  int level = 0;
  Rational weight;  // 1/D_k

  std::size_t size() const { return static_cast<std::size_t>(points.size()); }
  double weight_value() const { return to_double(weight); }
  Rational total_mass() const { return weight * static_cast<long>(size()); }
};

struct MeasureOptions {
  std::size_t point_cap = std::size_t{1} << 20;
};

// Backward level-wise solve: roots of f_k(w) = a, then of f_{k-1}(w) = beta
// for each such beta, down to level 1.
DiscreteMeasure preimage_measure(const CompositionTower& tower, Complex a,
                                 int k, MeasureOptions options = {});

// Largest |F_k(z) - a| / |a| over the points, evaluated along the tower.
double preimage_residual(const CompositionTower& tower,
                         const DiscreteMeasure& measure);

// Weight of the points with |z - z0| < t.
double disk_mass(const DiscreteMeasure& measure, Complex z0, double t);

struct DensityBracket {
  double lower = 0.0;  // integral of disk_mass(t)/t over (t_min, r)
  double upper = 0.0;  // 3 times the same over (t_min, 4r)
  double t_min = 0.0;
};

// quadrature_points == 0 integrates the step function disk_mass(t)/t in
// closed form; otherwise a trapezoid rule on that many log-spaced nodes.
DensityBracket density_integral(const DiscreteMeasure& measure, Complex z0,
                                double r, int quadrature_points = 0);

double support_radius(const DiscreteMeasure& measure);

// int z^j d(measure).
Complex discrete_moment(const DiscreteMeasure& measure, int j);

}  // namespace gjulia

#endif  // GJULIA_MEASURE_HPP_
