#pragma once

#include <functional>

#include "nullcone/types.hpp"

namespace nullcone {

struct QuadRule {
    Vector x;  // nodes
    Vector w;  // weights
};

/// Gauss-Legendre rule on [-1,1], exact for polynomials of degree <= 2n-1.
QuadRule gauss_legendre(int n);

/// Gauss rule for the weight (1-x^2)^alpha on [-1,1] (Gegenbauer/Jacobi a=b),
/// built by Golub-Welsch from the known recurrence coefficients.
QuadRule gauss_gegenbauer(int n, Real alpha);

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b] to an absolute
/// tolerance. Throws NumericGuardError when the subdivision limit is reached.
Real integrate_adaptive(const std::function<Real(Real)>& f, Real a, Real b,
                        Real abs_tol = 1e-12, int max_depth = 48);

}  // namespace nullcone
