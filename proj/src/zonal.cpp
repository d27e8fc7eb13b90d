#include "nullcone/zonal.hpp"

#include <cmath>

#include "nullcone/quadrature.hpp"

namespace nullcone {

Real sphere_volume(int k) {
    // Vol(S^k) = 2 pi^{(k+1)/2} / Gamma((k+1)/2)
    return 2.0 * std::pow(kPi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

ZonalGrid::ZonalGrid(int d, int bandlimit, int n_nodes) : d_(d), L_(bandlimit) {
    if (d < 2) throw DomainError("zonal grid needs sphere dimension >= 2");
    int n = n_nodes > 0 ? n_nodes : bandlimit + 1;
    if (n < bandlimit + 1) throw DomainError("zonal grid too small for bandlimit");
    const Real alpha = 0.5 * (d - 2);
    QuadRule q = gauss_gegenbauer(n, alpha);
    x_ = q.x;
    w_ = q.w * sphere_volume(d - 1);
    theta_.resize(n);
    sin_theta_.resize(n);
    for (int i = 0; i < n; ++i) {
        theta_[i] = std::acos(x_[i]);
        sin_theta_[i] = std::sqrt(1.0 - x_[i] * x_[i]);
    }

    // Orthonormal polynomials wrt the full measure, by the same recurrence
    // that defines the quadrature, plus differentiated recurrences.
    const int cols = L_ + 1;
    Matrix p(n, cols), dp(n, cols), d2p(n, cols);
    const Real mu0 = sphere_volume(d);  // total measure
    Vector b(cols + 1);
    b[0] = 0.0;
    for (int k = 1; k <= cols; ++k) {
        Real beta = k * (k + 2.0 * alpha) /
                    ((2.0 * k + 2.0 * alpha + 1.0) * (2.0 * k + 2.0 * alpha - 1.0));
        b[k] = std::sqrt(beta);
    }
    for (int i = 0; i < n; ++i) {
        const Real x = x_[i];
        p(i, 0) = 1.0 / std::sqrt(mu0);
        dp(i, 0) = 0.0;
        d2p(i, 0) = 0.0;
        if (cols > 1) {
            p(i, 1) = x * p(i, 0) / b[1];
            dp(i, 1) = p(i, 0) / b[1];
            d2p(i, 1) = 0.0;
        }
        for (int l = 2; l < cols; ++l) {
            p(i, l) = (x * p(i, l - 1) - b[l - 1] * p(i, l - 2)) / b[l];
            dp(i, l) =
                (p(i, l - 1) + x * dp(i, l - 1) - b[l - 1] * dp(i, l - 2)) / b[l];
            d2p(i, l) =
                (2.0 * dp(i, l - 1) + x * d2p(i, l - 1) - b[l - 1] * d2p(i, l - 2)) /
                b[l];
        }
    }
    // Convert x-derivatives to theta-derivatives.
    Z_ = p;
    dZ_.resize(n, cols);
    d2Z_.resize(n, cols);
    for (int i = 0; i < n; ++i) {
        const Real s = sin_theta_[i], x = x_[i];
        for (int l = 0; l < cols; ++l) {
            dZ_(i, l) = -s * dp(i, l);
            d2Z_(i, l) = -x * dp(i, l) + s * s * d2p(i, l);
        }
    }
}

std::shared_ptr<const ZonalGrid> ZonalGrid::dealiased(int d, int bandlimit) {
    return std::make_shared<const ZonalGrid>(d, bandlimit, 2 * bandlimit + 8);
}

Vector zonal_analyze(const ZonalGrid& grid, const Vector& values) {
    if (values.size() != grid.n_nodes())
        throw DomainError("zonal_analyze: size mismatch");
    return grid.zonal().transpose() * (grid.weights().array() * values.array()).matrix();
}

Vector zonal_synthesize(const ZonalGrid& grid, const Vector& coeffs) {
    Vector c = coeffs;
    if (c.size() != grid.bandlimit() + 1) {
        Vector tmp = Vector::Zero(grid.bandlimit() + 1);
        tmp.head(std::min(tmp.size(), c.size())) = c.head(std::min(tmp.size(), c.size()));
        c = std::move(tmp);
    }
    return grid.zonal() * c;
}

ZonalField ZonalField::from_values(ZonalGridPtr grid, Vector values) {
    Vector c = zonal_analyze(*grid, values);
    return {std::move(grid), std::move(values), std::move(c)};
}

ZonalField ZonalField::from_coeffs(ZonalGridPtr grid, Vector coeffs) {
    Vector v = zonal_synthesize(*grid, coeffs);
    if (coeffs.size() != grid->bandlimit() + 1) {
        Vector tmp = Vector::Zero(grid->bandlimit() + 1);
        tmp.head(std::min(tmp.size(), coeffs.size())) =
            coeffs.head(std::min(tmp.size(), coeffs.size()));
        coeffs = std::move(tmp);
    }
    return {std::move(grid), std::move(v), std::move(coeffs)};
}

ZonalField ZonalField::constant(ZonalGridPtr grid, Real value) {
    Vector c = Vector::Zero(grid->bandlimit() + 1);
    c[0] = value * std::sqrt(sphere_volume(grid->dim()));
    return from_coeffs(std::move(grid), std::move(c));
}

ZonalField ZonalField::cos_theta(ZonalGridPtr grid) {
    Vector v = grid->cos_theta();
    return from_values(std::move(grid), std::move(v));
}

ZonalField zonal_laplacian(const ZonalField& u) {
    const ZonalGrid& g = *u.grid();
    Vector c = u.coeffs();
    for (int l = 0; l <= g.bandlimit(); ++l) c[l] *= g.eigenvalue(l);
    return ZonalField::from_coeffs(u.grid(), std::move(c));
}

Vector zonal_dtheta(const ZonalField& u) { return u.grid()->zonal_dtheta() * u.coeffs(); }

Vector zonal_d2theta(const ZonalField& u) {
    return u.grid()->zonal_d2theta() * u.coeffs();
}

ZonalHessian zonal_hessian(const ZonalField& u) {
    const ZonalGrid& g = *u.grid();
    ZonalHessian h;
    h.tt = zonal_d2theta(u);
    Vector ut = zonal_dtheta(u);
    h.orbit.resize(g.n_nodes());
    for (int i = 0; i < g.n_nodes(); ++i)
        h.orbit[i] = g.cos_theta()[i] / g.sin_theta()[i] * ut[i];
    return h;
}

Vector zonal_traceless_hessian_normsq(const ZonalField& u) {
    const ZonalGrid& g = *u.grid();
    const int d = g.dim();
    ZonalHessian h = zonal_hessian(u);
    Vector lap = zonal_synthesize(g, [&] {
        Vector c = u.coeffs();
        for (int l = 0; l <= g.bandlimit(); ++l) c[l] *= g.eigenvalue(l);
        return c;
    }());
    Vector out(g.n_nodes());
    for (int i = 0; i < g.n_nodes(); ++i) {
        Real tr_over_d = lap[i] / d;
        Real a = h.tt[i] - tr_over_d;
        Real b = h.orbit[i] - tr_over_d;
        out[i] = a * a + (d - 1) * b * b;
    }
    return out;
}

Real zonal_integrate_values(const ZonalGrid& grid, const Vector& values) {
    return grid.weights().dot(values);
}

Real zonal_integrate(const ZonalField& u) {
    return zonal_integrate_values(*u.grid(), u.values());
}

Real zonal_low_mode_distance(const ZonalField& u) {
    const Real total = u.coeffs().squaredNorm();
    if (total == 0.0) return 0.0;
    Real high = 0.0;
    for (Index l = 2; l < u.coeffs().size(); ++l) high += u.coeffs()[l] * u.coeffs()[l];
    return std::sqrt(high / total);
}

}  // namespace nullcone
