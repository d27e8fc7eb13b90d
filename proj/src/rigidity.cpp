#include "nullcone/rigidity.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "nullcone/parallel.hpp"

namespace nullcone {

namespace {

int effective_bandlimit(const SphereField& u) {
    const int L = u.grid()->bandlimit();
    for (int l = L; l >= 1; --l)
        for (int m = -l; m <= l; ++m)
            if (u.coeffs()[SphereGrid::coeff_index(l, m)] != 0.0) return l;
    return 0;
}

struct TOperandFields {
    GradientField du;
    Vector lap;
    GradientField dlap;
    HessianField hess;
};

TOperandFields t_operands(const SphereField& u) {
    TOperandFields f;
    f.du = gradient(u);
    SphereField lap = laplacian(u);
    f.lap = lap.values();
    f.dlap = gradient(lap);
    f.hess = hessian(u);
    return f;
}

void t_components(const NullConeSurface& s, const TOperandFields& f, Vector& t_th,
                  Vector& t_ph) {
    const int n = s.model().dimension();
    const Index nn = s.grid()->n_nodes();
    t_th.resize(nn);
    t_ph.resize(nn);
    for (Index k = 0; k < nn; ++k) {
        const Real r = s.r().values()[k];
        const Real coef = (n - 1) * (s.fsq()[k] / r - s.ffp()[k]);
        const Real r_th = s.grad_r().d_theta[k];
        const Real r_ph = s.grad_r().d_phi[k];
        t_th[k] = coef * f.du.d_theta[k] + f.dlap.d_theta[k] / r -
                  f.lap[k] * r_th / (r * r) +
                  (n - 1) * (f.hess.tt[k] * r_th + f.hess.tp[k] * r_ph) / (r * r);
        t_ph[k] = coef * f.du.d_phi[k] + f.dlap.d_phi[k] / r -
                  f.lap[k] * r_ph / (r * r) +
                  (n - 1) * (f.hess.tp[k] * r_th + f.hess.pp[k] * r_ph) / (r * r);
    }
}

}  // namespace

OneForm linearized_residual(const NullConeSurface& surface, const SphereField& u) {
    if (u.grid() != surface.grid())
        throw DomainError("linearized_residual: u must live on the surface grid");
    OneForm out;
    out.grid = surface.grid();
    TOperandFields f = t_operands(u);
    t_components(surface, f, out.comp_theta, out.comp_phi);
    return out;
}

LinearizedOperator::LinearizedOperator(const NullConeSurface& surface, int bandlimit)
    : L_(bandlimit), grid_(surface.grid()) {
    if (bandlimit > surface.grid()->bandlimit())
        throw DomainError("operator bandlimit exceeds the surface grid bandlimit");
    if (bandlimit > 64)
        throw NumericGuardError("operator_size",
                                "bandlimit > 64 would need a dense SVD beyond the "
                                "memory guard");
    const SphereGrid& g = *grid_;
    const Index nn = g.n_nodes();
    const int ncoef = (L_ + 1) * (L_ + 1);
    M_.resize(2 * nn, ncoef);

    Vector sqrtw(nn);
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_phi(); ++j)
            sqrtw[g.node(i, j)] = std::sqrt(g.node_weight(i));

    // columns are independent; parallel assembly stays deterministic
    parallel_for(ncoef, [&](Index col) {
        SphereField y = SphereField::from_coeffs(
            grid_, Vector::Unit((L_ + 1) * (L_ + 1), col));
        TOperandFields f = t_operands(y);
        Vector t_th, t_ph;
        t_components(surface, f, t_th, t_ph);
        M_.col(col).head(nn) = sqrtw.array() * t_th.array();
        M_.col(col).tail(nn) = sqrtw.array() * t_ph.array();
    });

    Eigen::BDCSVD<Matrix> svd(M_, Eigen::ComputeThinV);
    // Eigen returns descending singular values; store ascending.
    sv_ = svd.singularValues().reverse();
    V_ = svd.matrixV().rowwise().reverse();
}

KernelResult kernel(const LinearizedOperator& op, Real threshold) {
    const Vector& sv = op.singular_values();
    const Real smax = sv[sv.size() - 1];
    KernelResult out;
    out.singular_values = sv;
    out.dimension = 0;
    while (out.dimension < sv.size() && sv[out.dimension] < threshold * smax)
        ++out.dimension;
    out.gap = (out.dimension == 0)
                  ? std::numeric_limits<Real>::infinity()
                  : (out.dimension < sv.size()
                         ? sv[out.dimension] / std::max(sv[out.dimension - 1],
                                                        Real(1e-300))
                         : std::numeric_limits<Real>::infinity());
    out.ill_separated = out.gap < 1e2;
    out.alternative_dimension = out.ill_separated ? out.dimension + 1 : out.dimension;
    for (int k = 0; k < out.dimension; ++k)
        out.basis.push_back(SphereField::from_coeffs(op.grid(), op.right_vectors().col(k)));
    return out;
}

QuadraticFormResult quadratic_form_identity(const NullConeSurface& s,
                                            const SphereField& u) {
    if (u.grid() != s.grid())
        throw DomainError("quadratic_form_identity: u must live on the surface grid");
    const SphereGrid& g = *s.grid();
    const int leff = effective_bandlimit(u);
    if (g.n_theta() < (3 * leff) / 2 + 1 || g.n_phi() < 3 * leff + 1)
        throw NumericGuardError("aliasing",
                                "grid too small for 3L de-aliasing of the identity");
    const int n = s.model().dimension();
    TOperandFields f = t_operands(u);
    Vector t_th, t_ph;
    t_components(s, f, t_th, t_ph);

    SphereField tl = traceless_hessian_normsq(u, n - 1);
    const Index nn = g.n_nodes();
    Vector lhs_d(nn), rhs_d(nn);
    for (Index k = 0; k < nn; ++k) {
        const Real r = s.r().values()[k];
        const Real rn2 = std::pow(r, n - 2);
        const Real gradu_sq = f.du.d_theta[k] * f.du.d_theta[k] +
                              f.du.d_phi[k] * f.du.d_phi[k];
        lhs_d[k] = rn2 * r * (f.du.d_theta[k] * t_th[k] + f.du.d_phi[k] * t_ph[k]);
        rhs_d[k] = (n - 1) * rn2 * (s.fsq()[k] - 1.0 - r * s.ffp()[k]) * gradu_sq -
                   (Real(n - 1) / (n - 2)) * rn2 * tl.values()[k];
    }
    QuadraticFormResult out;
    out.lhs = integrate_values(g, lhs_d);
    out.rhs = integrate_values(g, rhs_d);
    const Real scale =
        std::max({std::abs(out.lhs), std::abs(out.rhs),
                  integrate_values(g, rhs_d.cwiseAbs()) * 1e-3, Real(1e-14)});
    out.relative_gap = std::abs(out.lhs - out.rhs) / scale;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void zonal_t_component(const ZonalSurface& s, const ZonalField& u, Vector& t_th) {
    const int n = s.n();
    const ZonalGrid& g = *u.grid();
    Vector up = zonal_dtheta(u);
    Vector upp = zonal_d2theta(u);
    ZonalField lap = zonal_laplacian(u);
    Vector dlap = zonal_dtheta(lap);
    Vector rp = zonal_dtheta(s.r());
    t_th.resize(g.n_nodes());
    for (int i = 0; i < g.n_nodes(); ++i) {
        const Real r = s.r().values()[i];
        const Real coef = (n - 1) * (s.fsq()[i] / r - s.ffp()[i]);
        t_th[i] = coef * up[i] + dlap[i] / r - lap.values()[i] * rp[i] / (r * r) +
                  (n - 1) * upp[i] * rp[i] / (r * r);
    }
}

}  // namespace

Vector zonal_linearized_residual(const ZonalSurface& surface, const ZonalField& u) {
    Vector t;
    zonal_t_component(surface, u, t);
    return t;
}

ZonalLinearizedOperator::ZonalLinearizedOperator(const ZonalSurface& surface,
                                                 int bandlimit)
    : L_(bandlimit) {
    const ZonalGrid& g = *surface.u().grid();
    if (bandlimit > g.bandlimit())
        throw DomainError("zonal operator bandlimit exceeds the grid bandlimit");
    Matrix M(g.n_nodes(), L_ + 1);
    Vector sqrtw = g.weights().cwiseSqrt();
    for (int l = 0; l <= L_; ++l) {
        Vector c = Vector::Zero(g.bandlimit() + 1);
        c[l] = 1.0;
        ZonalField z = ZonalField::from_coeffs(surface.u().grid(), std::move(c));
        Vector t;
        zonal_t_component(surface, z, t);
        M.col(l) = sqrtw.array() * t.array();
    }
    Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinV);
    sv_ = svd.singularValues().reverse();
    V_ = svd.matrixV().rowwise().reverse();
}

ZonalKernelResult zonal_kernel(const ZonalLinearizedOperator& op, Real threshold) {
    const Vector& sv = op.singular_values();
    const Real smax = sv[sv.size() - 1];
    ZonalKernelResult out;
    out.singular_values = sv;
    out.dimension = 0;
    while (out.dimension < sv.size() && sv[out.dimension] < threshold * smax)
        ++out.dimension;
    out.gap = out.dimension == 0 ? std::numeric_limits<Real>::infinity()
                                 : sv[out.dimension] / sv[out.dimension - 1];
    return out;
}

QuadraticFormResult zonal_quadratic_form_identity(const ZonalSurface& s,
                                                  const ZonalField& u) {
    const int n = s.n();
    const ZonalGrid& g = *u.grid();
    Vector t;
    zonal_t_component(s, u, t);
    Vector up = zonal_dtheta(u);
    Vector tl = zonal_traceless_hessian_normsq(u);
    Vector lhs_d(g.n_nodes()), rhs_d(g.n_nodes());
    for (int i = 0; i < g.n_nodes(); ++i) {
        const Real r = s.r().values()[i];
        const Real rn2 = std::pow(r, n - 2);
        lhs_d[i] = rn2 * r * up[i] * t[i];
        rhs_d[i] = (n - 1) * rn2 * (s.fsq()[i] - 1.0 - r * s.ffp()[i]) * up[i] * up[i] -
                   (Real(n - 1) / (n - 2)) * rn2 * tl[i];
    }
    QuadraticFormResult out;
    out.lhs = zonal_integrate_values(g, lhs_d);
    out.rhs = zonal_integrate_values(g, rhs_d);
    const Real scale = std::max({std::abs(out.lhs), std::abs(out.rhs),
                                 zonal_integrate_values(g, rhs_d.cwiseAbs()) * 1e-3,
                                 Real(1e-14)});
    out.relative_gap = std::abs(out.lhs - out.rhs) / scale;
    return out;
}

}  // namespace nullcone
