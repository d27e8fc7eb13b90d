#pragma once

#include <memory>

#include "nullcone/sphere_grid.hpp"
#include "nullcone/types.hpp"

namespace nullcone {

using GridPtr = std::shared_ptr<const SphereGrid>;

/// Band-limited real scalar field on S^2 in the dual grid/coefficient
/// representation. Immutable after construction; all operations are pure.
class SphereField {
public:
    static SphereField from_values(GridPtr grid, Vector values);
    static SphereField from_coeffs(GridPtr grid, Vector coeffs);
    static SphereField constant(GridPtr grid, Real value);
    /// Cartesian coordinate function X^i (i = 1,2,3) restricted to S^2.
    static SphereField coordinate(GridPtr grid, int i);
    /// Single orthonormal harmonic Y_{l,m}.
    static SphereField harmonic(GridPtr grid, int l, int m);

    const GridPtr& grid() const { return grid_; }
    const Vector& values() const { return values_; }
    const Vector& coeffs() const { return coeffs_; }
    Real value(int i, int j) const { return values_[grid_->node(i, j)]; }
    Real coeff(int l, int m) const { return coeffs_[SphereGrid::coeff_index(l, m)]; }

    /// Pointwise evaluation of the coefficient representation at (theta, phi).
    Real eval(Real theta, Real phi) const;
    /// Exact partials of the coefficient representation at an interior point.
    Real eval_dtheta(Real theta, Real phi) const;
    Real eval_dphi(Real theta, Real phi) const;

private:
    SphereField(GridPtr grid, Vector values, Vector coeffs)
        : grid_(std::move(grid)), values_(std::move(values)), coeffs_(std::move(coeffs)) {}
    GridPtr grid_;
    Vector values_;
    Vector coeffs_;
};

Vector analyze(const SphereGrid& grid, const Vector& values);
Vector synthesize(const SphereGrid& grid, const Vector& coeffs);

/// Synthesize a coefficient vector onto another grid (bandlimits may differ;
/// coefficients are truncated or zero-padded).
SphereField resample(const SphereField& u, GridPtr target);

SphereField laplacian(const SphereField& u);

/// Orthonormal-frame (e_th, e_ph) derivative samples of a band-limited field,
/// evaluated exactly from the coefficient representation.
struct GradientField {
    GridPtr grid;
    Vector d_theta;      // e_th component
    Vector d_phi;        // e_ph component = (1/sin th) d/dph
};
GradientField gradient(const SphereField& u);

/// Covariant Hessian w.r.t. the round metric in the orthonormal frame.
struct HessianField {
    GridPtr grid;
    Vector tt;  // Hess(e_th, e_th)
    Vector tp;  // Hess(e_th, e_ph)
    Vector pp;  // Hess(e_ph, e_ph)
};
HessianField hessian(const SphereField& u);

/// |Hess u - (Lap u / d) g|^2 pointwise (d = sphere dimension, 2 here).
SphereField traceless_hessian_normsq(const SphereField& u, int d = 2);

Real integrate(const SphereField& u);
Real integrate_values(const SphereGrid& grid, const Vector& values);

SphereField project_low_modes(const SphereField& u);
/// Relative L^2 energy above l = 1: sqrt(sum_{l>=2} a^2 / sum a^2); zero for
/// the zero field by convention.
Real low_mode_distance(const SphereField& u);

/// Pointwise product as a values-field on the (shared) grid.
SphereField multiply(const SphereField& a, const SphereField& b);

}  // namespace nullcone
