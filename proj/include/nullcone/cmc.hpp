#pragma once

#include <complex>
#include <vector>

#include "nullcone/nullcone_surface.hpp"
#include "nullcone/types.hpp"

namespace nullcone {

enum class GaugeKind { None, FixLowModes, LevenbergMarquardt };

/// Nonlinear problem: find u > 0 with hsq(u) = E on the model's null cone.
struct CmcProblem {
    WarpingModel model = WarpingModel::minkowski();
    Real target_E = 1.0;          // in the hsq scaling, (1/length^2)
    int bandlimit = 16;
    GaugeKind gauge = GaugeKind::None;
    Vector pinned_low_modes;      // 4 coefficients (a00, a1m) for FixLowModes
    Real lm_lambda = 1e-8;        // Levenberg-Marquardt fallback parameter
    GridPtr grid;                 // work grid; dealiased(bandlimit) when null
};

/// hsq(u) - E with hsq in u-variables; throws DomainError with a node list
/// when u <= 0 or 1/u leaves the model domain.
SphereField hsq_residual(const CmcProblem& problem, const SphereField& u);

/// u^2 + u Lap u - |grad u|^2 - E, the constant-Gauss-curvature residual.
SphereField liouville_residual(const SphereField& u, Real E);

struct NewtonResult {
    SphereField u;
    int iterations;
    bool converged;
    std::vector<Real> residual_history;  // max |residual| per iteration
    bool used_levenberg_marquardt;
};

/// Newton iteration in coefficient space with the analytic Jacobian
///   J[h] = (n-1)(2 u f^2 - (f^2)'(1/u)) h - 2(n-1) grad u . grad h
///        + 2 h Lap u + 2 u Lap h,
/// gauge treatment of the space-form kernel, positivity step halving, and a
/// Levenberg-Marquardt fallback for ill-conditioned systems. Converged when
/// max |residual| < 1e-10 or after 50 iterations.
NewtonResult newton_solve(const CmcProblem& problem, const SphereField& u0);

/// Dense Jacobian of hsq_residual in the coefficient basis (for the
/// finite-difference gradient check).
Matrix cmc_jacobian(const CmcProblem& problem, const SphereField& u);

enum class VerdictKind { SphereOfSymmetry, LowModeBoost, NonRigid };

struct Classification {
    VerdictKind kind;
    Real r0 = 0.0;                // SphereOfSymmetry / LowModeBoost
    Real beta = 0.0;              // LowModeBoost
    Vec3 axis = Vec3::Zero();     // LowModeBoost
    Real distance = 0.0;          // NonRigid: relative l >= 2 energy
    bool theorem_violation = false;  // boosted verdict on a non-space-form model
};

Classification classify(const SphereField& u, const WarpingModel& model,
                        Real tol = 1e-8);

struct BochnerCheck {
    SphereField lhs;   // Lap(u^2 + u Lap u - |grad u|^2)
    SphereField rhs;   // 2u Lap u + (Lap u)^2 + u Lap^2 u - 2 |Hess u|^2
    Real gap;          // relative
};
/// Identity valid for every u on S^2 (uses Ric = metric).
BochnerCheck laplacian_bochner_identity(const SphereField& u);

struct MaxPrincipleCheck {
    SphereField lap_plus_two_u;   // (Lap + 2) u
    Real constancy;               // std/mean of (Lap+2)u
    Real identity_error;          // max |u Lap(Lap+2)u - 2 |tl Hess u|^2|
    Real estimated_E;
};
/// For Liouville solutions only; refuses (NumericGuardError) when the input
/// does not solve the equation to 1e-8.
MaxPrincipleCheck max_principle_functional(const SphereField& u);

struct MobiusResult {
    SphereField u;                 // conformal factor reciprocal, l <= 1
    Real low_mode_distance;
    Vector fitted_coeffs;          // (const, x1, x2, x3) from the field
    Vector printed_coeffs;         // commonly printed expansion, for comparison
    Vector corrected_coeffs;       // expansion with the 1/2 normalization
};
/// u = 1/r for the conformal factor of the fractional linear map
/// w = (az+b)/(cz+d) through stereographic projection; Gauss curvature 1.
MobiusResult mobius_conformal_factor(std::complex<Real> a, std::complex<Real> b,
                                     std::complex<Real> c, std::complex<Real> d,
                                     GridPtr grid);

/// Rbar/(n-1) = (nc/(n-1)) u^2 + 2 u Lap u - n |grad u|^2 for the conformal
/// metric u^{-2} sigma on a round base with Ric = c sigma.
SphereField conformal_scalar_curvature(const SphereField& u, int n, Real c);
Vector conformal_scalar_curvature(const ZonalField& u, int n, Real c);

struct ObataCheck {
    Real lhs;             // int u^{1-n} G(u) (full Bochner-expanded term)
    Real traceless_term;  // -n int u^{1-n} |Hess u - (Lap u / n) sigma|^2
    Real gap;             // relative
    Real zero_part;       // the all-u integral that must vanish by parts
};
ObataCheck obata_weighted_identity(const SphereField& u, int n, Real c);
ObataCheck obata_weighted_identity(const ZonalField& u, int n, Real c);

}  // namespace nullcone
