#pragma once

#include <vector>

#include "nullcone/nullcone_surface.hpp"
#include "nullcone/types.hpp"

namespace nullcone {

/// Linearized infinitesimal-CNNC operator applied to u (variation U = u r):
///   T_a(u) = (n-1)(f^2/r - ff') grad_a u + grad_a(Lap u / r)
///          + (n-1) Hess_ab u grad^b r / r^2,
/// all round-metric operators, f evaluated at r(x). Returned in round
/// orthonormal components on the surface grid.
OneForm linearized_residual(const NullConeSurface& surface, const SphereField& u);

/// Dense discretization of T on the orthonormal harmonic basis up to degree
/// L: column (l,m) holds sqrt(node weight)-scaled grid samples of the two
/// components of T(Y_lm), so the matrix 2-norm approximates the L^2 operator
/// norm. SVD factors are computed on construction.
class LinearizedOperator {
public:
    LinearizedOperator(const NullConeSurface& surface, int bandlimit);

    int bandlimit() const { return L_; }
    const Matrix& matrix() const { return M_; }
    /// Ascending singular values.
    const Vector& singular_values() const { return sv_; }
    /// Right singular vectors matching singular_values() columns.
    const Matrix& right_vectors() const { return V_; }
    const GridPtr& grid() const { return grid_; }

private:
    int L_;
    GridPtr grid_;
    Matrix M_;
    Vector sv_;
    Matrix V_;
};

struct KernelResult {
    int dimension;
    Real gap;                     // sv[dim] / sv[dim-1], infinity when dim = 0
    Vector singular_values;       // ascending, full spectrum for audit
    std::vector<SphereField> basis;
    bool ill_separated;           // no 10^2 gap between kept and rejected
    int alternative_dimension;    // candidate count when ill separated
};

/// Kernel by SVD threshold (default 1e-7 x sigma_max) with the gap audit.
KernelResult kernel(const LinearizedOperator& op, Real threshold = 1e-7);

struct QuadraticFormResult {
    Real lhs;           // int r^{n-1} grad u . T(u)
    Real rhs;           // int [(n-1) r^{n-2}(f^2-1-r ff')|grad u|^2
                        //      - (n-1)/(n-2) r^{n-2} |traceless Hess u|^2]
    Real relative_gap;
};

/// The integration-by-parts + Ricci identity behind the rigidity theorem;
/// holds for every band-limited u. Throws NumericGuardError when the surface
/// grid does not de-alias the cubic products of u.
QuadraticFormResult quadratic_form_identity(const NullConeSurface& surface,
                                            const SphereField& u);

// --------------------------------------------------------------------------
// Axisymmetric path for general n >= 3 (1D operator in theta).

Vector zonal_linearized_residual(const ZonalSurface& surface, const ZonalField& u);

class ZonalLinearizedOperator {
public:
    ZonalLinearizedOperator(const ZonalSurface& surface, int bandlimit);
    int bandlimit() const { return L_; }
    const Vector& singular_values() const { return sv_; }
    const Matrix& right_vectors() const { return V_; }

private:
    int L_;
    Vector sv_;
    Matrix V_;
};

struct ZonalKernelResult {
    int dimension;
    Real gap;
    Vector singular_values;
};
ZonalKernelResult zonal_kernel(const ZonalLinearizedOperator& op, Real threshold = 1e-7);

QuadraticFormResult zonal_quadratic_form_identity(const ZonalSurface& surface,
                                                  const ZonalField& u);

}  // namespace nullcone
