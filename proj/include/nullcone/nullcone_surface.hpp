#pragma once

#include <variant>

#include "nullcone/sphere_field.hpp"
#include "nullcone/types.hpp"
#include "nullcone/warping_model.hpp"
#include "nullcone/zonal.hpp"

namespace nullcone {

/// Spacelike surface F(x) = (v(x), w0, x) inside the standard null cone
/// w = w0, represented by the positive radial profile r (equivalently
/// u = 1/r) on the round sphere. On the surface v = 2 r^* + w0, so the
/// advanced time is determined by the profile and the cone label.
///
/// n = 3 (2-sphere) surfaces carry the full 2D machinery; general n uses the
/// axisymmetric zonal path (ZonalSurface below).
class NullConeSurface {
public:
    /// Build from the u = 1/r profile (the representation rigidity lives in).
    NullConeSurface(WarpingModel model, Real w0, SphereField u);
    static NullConeSurface from_radius(WarpingModel model, Real w0, SphereField r);

    const WarpingModel& model() const { return model_; }
    Real w0() const { return w0_; }
    const GridPtr& grid() const { return u_.grid(); }
    const SphereField& u() const { return u_; }
    const SphereField& r() const { return r_; }

    // Pointwise caches over grid nodes.
    const Vector& fsq() const { return fsq_; }        // f^2(r(x))
    const Vector& ffp() const { return ffp_; }        // (f f')(r(x))
    const GradientField& grad_r() const { return grad_r_; }
    const GradientField& grad_u() const { return grad_u_; }
    const Vector& lap_r() const { return lap_r_; }    // round-metric Laplacian
    const Vector& lap_u() const { return lap_u_; }
    /// v(x) = 2 r^*(r(x)) + w0 (canonical tortoise gauge).
    const Vector& advanced_time() const { return v_; }

private:
    WarpingModel model_;
    Real w0_;
    SphereField u_;
    SphereField r_;
    Vector fsq_, ffp_, v_, lap_r_, lap_u_;
    GradientField grad_r_, grad_u_;
};

/// Null frame along the surface in EF components (v, w, theta, phi):
/// L = (2r/f^2) d_v and Lbar = (1/r)(2 d_w + f^2 grad v - (f^2/2)|grad v|^2 d_v),
/// expanded into coordinate components, plus the embedding tangents.
struct NullFrame {
    GridPtr grid;
    Matrix L;        // n_nodes x 4
    Matrix Lbar;     // n_nodes x 4
    Matrix T_theta;  // dF/dtheta
    Matrix T_phi;    // dF/dphi
};

NullFrame frame(const NullConeSurface& surface);

/// Pairing <X, Y> under the EF metric at node k, given coordinate components.
Real ef_pairing(const NullConeSurface& surface, Index k, const Eigen::Vector4d& X,
                const Eigen::Vector4d& Y);

/// tr chibar = -(1/r^2)[(n-1)(f^2 + |grad r|^2_sigma) - 2 r Lap_sigma r].
SphereField tr_chi_bar(const NullConeSurface& surface);

/// E = -tr chibar > 0, the squared-mean-curvature-norm scalar in the
/// artifact's sign convention; computed in u-variables
///   E = (n-1) f^2 u^2 - (n-1)|grad u|^2 + 2 u Lap u.
SphereField hsq(const NullConeSurface& surface);
/// Both evaluation routes (sigma-form from r, u-form); they agree to
/// spectral accuracy and the pair is exposed for the two-route tests.
std::pair<SphereField, SphereField> hsq_two_routes(const NullConeSurface& surface);

struct MeanCurvatureResult {
    GridPtr grid;
    Matrix H;             // EF components, n_nodes x 4; H = Lbar - (E/4) L
    Vector inner;         // <H, H> from the frame arithmetic
    SphereField hsq;      // E field
    Real convention_ratio;  // measured <H,H>/E (should be 1)
    bool degenerate;      // E vanishes somewhere
};
MeanCurvatureResult mean_curvature_vector(const NullConeSurface& surface);

/// 1-form on the surface in round-orthonormal components (e_th, e_ph).
struct OneForm {
    GridPtr grid;
    Vector comp_theta;
    Vector comp_phi;
};

/// Connection 1-form of the normal bundle in the mean-curvature frame,
/// alpha_H(X) = <D_X e_n^H, e_{n+1}^H>, computed by spectral differentiation
/// of the frame coefficient fields in the (L, Lbar) basis plus the exact EF
/// Christoffels. Requires <H,H> > 0 everywhere.
OneForm alpha_H(const NullConeSurface& surface);

/// alpha_H + d log |H|; vanishes for every surface in a standard null cone.
OneForm cnnc_residual(const NullConeSurface& surface);

enum class KillingFamily {
    TimeTranslation,   // any model
    MinkowskiBoost,    // Minkowski only
    AdSBoost,          // K of anti-de Sitter
    AdSBoostPrime,     // K' of anti-de Sitter
    DeSitterBoost      // K of de Sitter
};

/// (computed, closed_form) pairings <K, L> along the surface: the computed
/// side contracts the static-patch Killing components (converted to EF) with
/// L under the EF metric; the closed form evaluates the proposition formula.
std::pair<SphereField, SphereField> killing_pairing(const NullConeSurface& surface,
                                                    KillingFamily which, int axis = 3);

/// Boosted sphere of symmetry: r = r0 / (cosh b - sinh b X^axis); space-form
/// models only. The u = 1/r profile is exactly an l <= 1 field.
NullConeSurface boost_sphere(const WarpingModel& model, Real w0, Real r0, Real beta,
                             int axis, int bandlimit);

struct BoostFit {
    Real r0;
    Real beta;
    Vec3 axis;             // unit vector; arbitrary when degenerate
    bool degenerate_axis;  // beta == 0 so the axis is undetermined
};
struct NotLowMode {
    Real distance;
};

/// Recover (r0, beta, axis) from an l <= 1 profile u = a + b.X with a > |b|;
/// NotLowMode carries the relative l >= 2 energy otherwise. Throws
/// DomainError when a <= |b| (null-boost limit, u not positive).
std::variant<BoostFit, NotLowMode> fit_boosted_sphere(const SphereField& u,
                                                      Real tol = 1e-8);

// ---------------------------------------------------------------------------
// Axisymmetric surfaces on S^{n-1} for general n >= 3 (zonal path).

class ZonalSurface {
public:
    ZonalSurface(WarpingModel model, Real w0, ZonalField u);

    const WarpingModel& model() const { return model_; }
    int n() const { return model_.dimension(); }
    Real w0() const { return w0_; }
    const ZonalField& u() const { return u_; }
    const ZonalField& r() const { return r_; }
    const Vector& fsq() const { return fsq_; }
    const Vector& ffp() const { return ffp_; }

private:
    WarpingModel model_;
    Real w0_;
    ZonalField u_;
    ZonalField r_;
    Vector fsq_, ffp_;
};

/// E = (n-1) f^2 u^2 - (n-1) u'^2 + 2 u Lap u for axisymmetric profiles.
Vector zonal_hsq(const ZonalSurface& surface);

}  // namespace nullcone
