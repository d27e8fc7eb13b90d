#include "nullcone/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace nullcone {

QuadRule gauss_legendre(int n) {
    QuadRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    // Newton iteration on P_n with the usual Chebyshev-like initial guesses.
    for (int i = 0; i < n; ++i) {
        Real x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        Real p_deriv = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            Real p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            p_deriv = n * (x * p1 - p0) / (x * x - 1.0);
            Real dx = p1 / p_deriv;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.x[n - 1 - i] = x;  // ascending in x
        rule.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * p_deriv * p_deriv);
    }
    return rule;
}

QuadRule gauss_gegenbauer(int n, Real alpha) {
    // Monic three-term recurrence for the weight (1-x^2)^alpha:
    //   beta_k = k (k + 2 alpha) / ((2k + 2 alpha + 1)(2k + 2 alpha - 1))
    // mu0 = int_{-1}^{1} (1-x^2)^alpha dx = sqrt(pi) Gamma(a+1)/Gamma(a+3/2).
    const Real mu0 =
        std::sqrt(kPi) * std::exp(std::lgamma(alpha + 1.0) - std::lgamma(alpha + 1.5));
    Matrix J = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        Real beta = k * (k + 2.0 * alpha) /
                    ((2.0 * k + 2.0 * alpha + 1.0) * (2.0 * k + 2.0 * alpha - 1.0));
        J(k, k - 1) = J(k - 1, k) = std::sqrt(beta);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(J);
    QuadRule rule;
    rule.x = es.eigenvalues();
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) {
        Real v = es.eigenvectors()(0, i);
        rule.w[i] = mu0 * v * v;
    }
    return rule;
}

namespace {

// Gauss-Kronrod 7-15 node pair on [-1,1].
constexpr Real kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr Real kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr Real kGaussW[4] = {0.129484966168870, 0.279705391489277,
                             0.381830050505119, 0.417959183673469};

struct GkEstimate {
    Real value;
    Real error;
};

GkEstimate gk15(const std::function<Real(Real)>& f, Real a, Real b) {
    const Real c = 0.5 * (a + b);
    const Real h = 0.5 * (b - a);
    Real fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kKronrodX[i]);
        fv[14 - i] = f(c + h * kKronrodX[i]);
    }
    fv[7] = f(c);
    Real kron = 0.0;
    for (int i = 0; i < 7; ++i) kron += kKronrodW[i] * (fv[i] + fv[14 - i]);
    kron += kKronrodW[7] * fv[7];
    Real gauss = kGaussW[3] * fv[7];
    for (int i = 0; i < 3; ++i) gauss += kGaussW[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    return {h * kron, std::abs(h * (kron - gauss))};
}

Real adapt(const std::function<Real(Real)>& f, Real a, Real b, Real tol, int depth,
           int max_depth) {
    GkEstimate e = gk15(f, a, b);
    if (e.error <= tol || e.error <= 1e-17 * std::abs(e.value)) return e.value;
    if (depth >= max_depth)
        throw NumericGuardError("quadrature_depth",
                                "adaptive refinement limit reached on subinterval");
    Real m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * tol, depth + 1, max_depth) +
           adapt(f, m, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

Real integrate_adaptive(const std::function<Real(Real)>& f, Real a, Real b, Real abs_tol,
                        int max_depth) {
    if (a == b) return 0.0;
    return adapt(f, a, b, abs_tol, 0, max_depth);
}

}  // namespace nullcone
