#pragma once

#include <memory>

#include "nullcone/types.hpp"

namespace nullcone {

/// Gauss-Gegenbauer grid for axisymmetric fields on S^d (d >= 2), with the
/// L^2(S^d)-orthonormal zonal harmonic tables up to degree L. The quadrature
/// weights absorb the full S^d measure Vol(S^{d-1}) (1-x^2)^{(d-2)/2} dx.
class ZonalGrid {
public:
    ZonalGrid(int d, int bandlimit, int n_nodes = 0);
    static std::shared_ptr<const ZonalGrid> dealiased(int d, int bandlimit);

    int dim() const { return d_; }
    int bandlimit() const { return L_; }
    int n_nodes() const { return static_cast<int>(x_.size()); }

    const Vector& cos_theta() const { return x_; }
    const Vector& theta() const { return theta_; }
    const Vector& sin_theta() const { return sin_theta_; }
    const Vector& weights() const { return w_; }

    const Matrix& zonal() const { return Z_; }           // Z_l(theta_i)
    const Matrix& zonal_dtheta() const { return dZ_; }   // dZ_l/dtheta
    const Matrix& zonal_d2theta() const { return d2Z_; } // d^2Z_l/dtheta^2

    /// Laplace-Beltrami eigenvalue of degree l on S^d: -l(l+d-1).
    Real eigenvalue(int l) const { return -Real(l) * (l + d_ - 1); }

private:
    int d_, L_;
    Vector x_, w_, theta_, sin_theta_;
    Matrix Z_, dZ_, d2Z_;
};

using ZonalGridPtr = std::shared_ptr<const ZonalGrid>;

/// Axisymmetric scalar field on S^d in the dual representation.
class ZonalField {
public:
    static ZonalField from_values(ZonalGridPtr grid, Vector values);
    static ZonalField from_coeffs(ZonalGridPtr grid, Vector coeffs);
    static ZonalField constant(ZonalGridPtr grid, Real value);
    /// cos(theta), the degree-1 zonal harmonic up to normalization.
    static ZonalField cos_theta(ZonalGridPtr grid);

    const ZonalGridPtr& grid() const { return grid_; }
    const Vector& values() const { return values_; }
    const Vector& coeffs() const { return coeffs_; }

private:
    ZonalField(ZonalGridPtr g, Vector v, Vector c)
        : grid_(std::move(g)), values_(std::move(v)), coeffs_(std::move(c)) {}
    ZonalGridPtr grid_;
    Vector values_;
    Vector coeffs_;
};

Vector zonal_analyze(const ZonalGrid& grid, const Vector& values);
Vector zonal_synthesize(const ZonalGrid& grid, const Vector& coeffs);

ZonalField zonal_laplacian(const ZonalField& u);
/// du/dtheta samples (orthonormal e_th component of the gradient).
Vector zonal_dtheta(const ZonalField& u);
Vector zonal_d2theta(const ZonalField& u);

/// Covariant Hessian of an axisymmetric field: the (e_th,e_th) component is
/// u'' and each of the (d-1) orbit directions contributes cot(th) u'.
struct ZonalHessian {
    Vector tt;      // u''
    Vector orbit;   // cot th u'
};
ZonalHessian zonal_hessian(const ZonalField& u);

/// |Hess u - (Lap u / d) g|^2 = (u'' - L/d)^2 + (d-1)(cot th u' - L/d)^2.
Vector zonal_traceless_hessian_normsq(const ZonalField& u);

Real zonal_integrate(const ZonalField& u);
Real zonal_integrate_values(const ZonalGrid& grid, const Vector& values);
Real zonal_low_mode_distance(const ZonalField& u);

/// Surface area of the unit sphere S^k.
Real sphere_volume(int k);

}  // namespace nullcone
