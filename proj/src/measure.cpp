#include "gjulia/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "gjulia/errors.hpp"
#include "gjulia/roots.hpp"

namespace gjulia {

AnchorCertificate check_anchor(const RegularityConstants& c, Complex a) {
  AnchorCertificate cert;
  cert.a = a;
  const double m = std::abs(a);
  if (!(m > 1.0)) {
    cert.margin = -std::numeric_limits<double>::infinity();
    return cert;
  }
  cert.margin = m * c.A1 * (1.0 - c.A2 / (m - 1.0)) - 2.0;
  cert.satisfied = cert.margin > 0.0;
  return cert;
}

Complex default_anchor(const CompositionTower& tower) {
  return Complex(2.0 * tower.escape_radius(), 0.0);
}

DiscreteMeasure preimage_measure(const CompositionTower& tower, Complex a,
                                 int k, MeasureOptions options) {
  if (k < 1) throw PreconditionError("measure level must be >= 1");
  if (k > tower.levels())
    throw PreconditionError("level " + std::to_string(k) +
                            " beyond the sequence length");
  const auto cert = check_anchor(tower.spec().constants(), a);
  if (!cert.satisfied) {
    std::ostringstream msg;
    msg << "anchor |a|=" << std::abs(a)
        << " violates |a| A1 (1 - A2/(|a|-1)) > 2 (margin " << cert.margin
        << ")";
    throw PreconditionError(msg.str());
  }
  const BigInt& degree = tower.cumulative_degree(k);
  if (degree > BigInt(options.point_cap))
    throw PreconditionError("D_" + std::to_string(k) + " = " + degree.str() +
                            " exceeds the point cap " +
                            std::to_string(options.point_cap));

  std::vector<Complex> targets{a};
  for (int n = k; n >= 1; --n) {
    const auto& f = tower.generator(n).numeric;
    std::vector<Complex> next;
    next.reserve(targets.size() * f.degree());
    for (const Complex beta : targets) {
      Eigen::VectorXcd roots;
      try {
        roots = solve_level(f, beta);
      } catch (const NumericalError& e) {
        std::ostringstream msg;
        msg << e.what() << " at level " << n << ", beta = (" << beta.real()
            << ", " << beta.imag() << ")";
        throw NumericalError(msg.str());
      }
      for (Eigen::Index i = 0; i < roots.size(); ++i) next.push_back(roots(i));
    }
    targets = std::move(next);
  }

  DiscreteMeasure m;
  m.points = Eigen::Map<Eigen::VectorXcd>(targets.data(),
                                          static_cast<Eigen::Index>(targets.size()));
  sort_lexicographic(m.points);
  m.anchor = a;
  m.level = k;
  m.weight = Rational(BigInt(1), degree);
  return m;
}

double preimage_residual(const CompositionTower& tower,
                         const DiscreteMeasure& measure) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < measure.points.size(); ++i) {
    const auto state = tower_eval(tower, measure.points(i), measure.level);
    const Complex value =
        state.log_scale ? std::exp(state.log_value) : state.value;
    worst = std::max(worst, std::abs(value - measure.anchor) /
                                std::abs(measure.anchor));
  }
  return worst;
}

double disk_mass(const DiscreteMeasure& measure, Complex z0, double t) {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < measure.points.size(); ++i)
    if (std::abs(measure.points(i) - z0) < t) ++count;
  return static_cast<double>(count) * measure.weight_value();
}

namespace {

// Smallest distance between two of the given points (sweep over real parts).
double min_spacing(std::vector<Complex> pts) {
  std::sort(pts.begin(), pts.end(),
            [](Complex a, Complex b) { return a.real() < b.real(); });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1;
         j < pts.size() && pts[j].real() - pts[i].real() < best; ++j) {
      const double d = std::abs(pts[j] - pts[i]);
      if (d > 0.0) best = std::min(best, d);
    }
  return best;
}

double step_integral(const std::vector<double>& distances, double t_min,
                     double upper, double weight) {
  double total = 0.0;
  for (double d : distances)
    if (d < upper) total += std::log(upper / std::max(d, t_min));
  return total * weight;
}

double trapezoid_integral(const DiscreteMeasure& m, Complex z0, double t_min,
                          double upper, int nodes) {
  const double step = std::log(upper / t_min) / (nodes - 1);
  double total = 0.0;
  double previous = disk_mass(m, z0, t_min);
  for (int i = 1; i < nodes; ++i) {
    const double current = disk_mass(m, z0, t_min * std::exp(step * i));
    // dt/t = d(log t)
    total += 0.5 * (previous + current) * step;
    previous = current;
  }
  return total;
}

}  // namespace

DensityBracket density_integral(const DiscreteMeasure& measure, Complex z0,
                                double r, int quadrature_points) {
  if (!(r > 0.0 && r < 1.0))
    throw PreconditionError("density_integral requires 0 < r < 1");
  if (quadrature_points == 1 || quadrature_points < 0)
    throw PreconditionError("quadrature_points must be 0 or >= 2");
  std::vector<Complex> near;
  std::vector<double> distances;
  for (Eigen::Index i = 0; i < measure.points.size(); ++i) {
    const double d = std::abs(measure.points(i) - z0);
    if (d < 4.0 * r) {
      near.push_back(measure.points(i));
      distances.push_back(d);
    }
  }
  DensityBracket out;
  if (near.empty()) return out;
  out.t_min = std::max(min_spacing(near), 1e-4 * r);
  if (!std::isfinite(out.t_min)) out.t_min = 1e-4 * r;
  if (out.t_min >= r) return out;
  const double w = measure.weight_value();
  if (quadrature_points == 0) {
    out.lower = step_integral(distances, out.t_min, r, w);
    out.upper = 3.0 * step_integral(distances, out.t_min, 4.0 * r, w);
  } else {
    out.lower = trapezoid_integral(measure, z0, out.t_min, r, quadrature_points);
    out.upper = 3.0 * trapezoid_integral(measure, z0, out.t_min, 4.0 * r,
                                         quadrature_points);
  }
  return out;
}

double support_radius(const DiscreteMeasure& measure) {
  return measure.points.size() == 0 ? 0.0 : measure.points.cwiseAbs().maxCoeff();
}

Complex discrete_moment(const DiscreteMeasure& measure, int j) {
  if (j < 0) throw PreconditionError("moment index must be >= 0");
  Complex total(0.0);
  for (Eigen::Index i = 0; i < measure.points.size(); ++i)
    total += std::pow(measure.points(i), j);
  return total * measure.weight_value();
}

}  // namespace gjulia
