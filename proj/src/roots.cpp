#include "gjulia/roots.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gjulia/errors.hpp"

namespace gjulia {

Complex polish_root(const Polynomial<Complex>& p, Complex target, Complex w) {
  auto [value, slope] = evaluate_with_derivative(p, w);
  const Complex residual = value - target;
  if (residual == Complex(0.0) || slope == Complex(0.0)) return w;
  Complex step = residual / slope;
  const double before = std::abs(residual);
  for (int attempt = 0; attempt < 5; ++attempt) {
    const Complex candidate = w - step;
    const double after = std::abs(evaluate(p, candidate) - target);
    if (std::isfinite(after) && after <= before) return candidate;
    step *= 0.5;
  }
  return w;
}

Eigen::VectorXcd solve_level(const Polynomial<Complex>& p, Complex target) {
  const int d = p.degree();
  if (d < 1) throw PreconditionError("solve_level requires degree >= 1");
  const Complex lead = p.leading();
  Eigen::VectorXcd roots(d);
  if (d == 1) {
    roots(0) = (target - p[0]) / lead;
    return roots;
  }
  // Companion matrix of the monic polynomial (p - target) / lead.
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  companion.diagonal(-1).setOnes();
  for (int j = 0; j < d; ++j) {
    const Complex c = j == 0 ? p[0] - target : p[j];
    companion(j, d - 1) = -c / lead;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("companion eigenvalue iteration did not converge");
  roots = solver.eigenvalues();
  for (int j = 0; j < d; ++j) {
    roots(j) = polish_root(p, target, roots(j));
    if (!std::isfinite(roots(j).real()) || !std::isfinite(roots(j).imag()))
      throw NumericalError("non-finite root after polishing");
  }
  return roots;
}

Eigen::VectorXcd real_polynomial_roots(const Polynomial<double>& p) {
  const int d = p.degree();
  if (d < 1)
    throw PreconditionError("real_polynomial_roots requires degree >= 1");
  Eigen::VectorXcd roots(d);
  if (d == 1) {
    roots(0) = Complex(-p[0] / p.leading(), 0.0);
    return roots;
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  companion.diagonal(-1).setOnes();
  for (int j = 0; j < d; ++j) companion(j, d - 1) = -p[j] / p.leading();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("companion eigenvalue iteration did not converge");
  roots = solver.eigenvalues();
  return roots;
}

void sort_lexicographic(Eigen::VectorXcd& points) {
  std::vector<Complex> buffer(points.data(), points.data() + points.size());
  std::sort(buffer.begin(), buffer.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  for (Eigen::Index i = 0; i < points.size(); ++i) points(i) = buffer[i];
}

}  // namespace gjulia
