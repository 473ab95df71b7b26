#ifndef GJULIA_ROOTS_HPP_
#define GJULIA_ROOTS_HPP_

#include <Eigen/Core>

#include "gjulia/polynomial.hpp"
#include "gjulia/scalar.hpp"

namespace gjulia {

// All roots (with multiplicity) of p(w) = target, from the eigenvalues of the
// companion matrix of the monic polynomial (p - target)/lead, followed by
// one damped Newton polishing step per root.
// Throws NumericalError if the eigenvalue iteration does not converge.
Eigen::VectorXcd solve_level(const Polynomial<Complex>& p, Complex target);

inline Eigen::VectorXcd polynomial_roots(const Polynomial<Complex>& p) {
  return solve_level(p, Complex(0.0, 0.0));
}

// Real polynomial roots as complex numbers (companion matrix of a real
// polynomial, so conjugate pairs come out exactly conjugate).
Eigen::VectorXcd real_polynomial_roots(const Polynomial<double>& p);

// One damped Newton correction on p(w) = target; the step is halved up to
// four times until the residual does not grow.
Complex polish_root(const Polynomial<Complex>& p, Complex target, Complex w);

// Sorts by (re, im) lexicographically so outputs do not depend on the order
// eigenvalues come back in.
void sort_lexicographic(Eigen::VectorXcd& points);

}  // namespace gjulia

#endif  // GJULIA_ROOTS_HPP_
