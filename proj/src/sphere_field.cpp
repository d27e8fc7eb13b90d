#include "nullcone/sphere_field.hpp"

#include <cmath>
#include <vector>

namespace nullcone {

namespace {
const Real kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);
const Real kInvSqrtPi = 1.0 / std::sqrt(kPi);
}  // namespace

Vector analyze(const SphereGrid& grid, const Vector& values) {
    if (values.size() != grid.n_nodes())
        throw DomainError("analyze: value size does not match the grid");
    const int L = grid.bandlimit();
    const int nt = grid.n_theta(), np = grid.n_phi();
    Eigen::Map<const Matrix, 0, Eigen::Stride<1, Eigen::Dynamic>> U(
        values.data(), nt, np, Eigen::Stride<1, Eigen::Dynamic>(1, np));
    // Longitude pass: G_c(i,m) = sum_j U(i,j) cos(m ph_j) * 2 pi / n_phi.
    const Real fac = 2.0 * kPi / np;
    Matrix Gc = fac * (U * grid.cos_table());
    Matrix Gs = fac * (U * grid.sin_table());
    // Colatitude pass with Gauss-Legendre weights.
    Vector coeffs = Vector::Zero(grid.coeff_count());
    const Vector& w = grid.gl_weights();
    for (int m = 0; m <= L; ++m) {
        const int c0 = grid.column_offset(m);
        const int nl = L + 1 - m;
        const auto Pm = grid.legendre().middleCols(c0, nl);
        if (m == 0) {
            Vector a = Pm.transpose() * (w.array() * Gc.col(0).array()).matrix();
            for (int l = 0; l <= L; ++l)
                coeffs[SphereGrid::coeff_index(l, 0)] = a[l] * kInvSqrt2Pi;
        } else {
            Vector ac = Pm.transpose() * (w.array() * Gc.col(m).array()).matrix();
            Vector as = Pm.transpose() * (w.array() * Gs.col(m).array()).matrix();
            for (int l = m; l <= L; ++l) {
                coeffs[SphereGrid::coeff_index(l, m)] = ac[l - m] * kInvSqrtPi;
                coeffs[SphereGrid::coeff_index(l, -m)] = as[l - m] * kInvSqrtPi;
            }
        }
    }
    return coeffs;
}

namespace {

// Shared synthesis core: contract coefficients against a theta-table (P, dP,
// or d2P) and a longitude mode action. mode_shift: 0 -> trig(m ph),
// 1 -> d/dph applied (m cos <-> -m sin swap).
Vector synthesize_table(const SphereGrid& grid, const Vector& coeffs, const Matrix& tab,
                        bool dphi) {
    const int L = grid.bandlimit();
    const int nt = grid.n_theta(), np = grid.n_phi();
    const int lmax_in = static_cast<int>(std::lround(std::sqrt(Real(coeffs.size())))) - 1;
    Matrix Hc = Matrix::Zero(nt, L + 1);  // theta profiles multiplying cos(m ph)
    Matrix Hs = Matrix::Zero(nt, L + 1);  // ... sin(m ph)
    const int lm = std::min(L, lmax_in);
    for (int m = 0; m <= lm; ++m) {
        const int c0 = grid.column_offset(m);
        const int nl = lm + 1 - m;
        const auto Pm = tab.middleCols(c0, nl);
        Vector ac(nl), as(nl);
        for (int l = m; l <= lm; ++l) {
            ac[l - m] = coeffs[SphereGrid::coeff_index(l, m)];
            as[l - m] = (m > 0) ? coeffs[SphereGrid::coeff_index(l, -m)] : 0.0;
        }
        Real norm = (m == 0) ? kInvSqrt2Pi : kInvSqrtPi;
        Hc.col(m) = norm * (Pm * ac);
        if (m > 0) Hs.col(m) = norm * (Pm * as);
    }
    Matrix U;
    if (!dphi) {
        U = Hc * grid.cos_table().transpose() + Hs * grid.sin_table().transpose();
    } else {
        // d/dph: cos(m ph) -> -m sin(m ph), sin(m ph) -> m cos(m ph)
        Matrix Hc2 = Hc, Hs2 = Hs;
        for (int m = 0; m <= L; ++m) {
            Hc2.col(m) *= -Real(m);
            Hs2.col(m) *= Real(m);
        }
        U = Hs2 * grid.cos_table().transpose() + Hc2 * grid.sin_table().transpose();
    }
    Vector out(grid.n_nodes());
    for (int i = 0; i < nt; ++i) out.segment(Index(i) * np, np) = U.row(i).transpose();
    return out;
}

}  // namespace

Vector synthesize(const SphereGrid& grid, const Vector& coeffs) {
    return synthesize_table(grid, coeffs, grid.legendre(), false);
}

SphereField SphereField::from_values(GridPtr grid, Vector values) {
    Vector coeffs = analyze(*grid, values);
    return {std::move(grid), std::move(values), std::move(coeffs)};
}

SphereField SphereField::from_coeffs(GridPtr grid, Vector coeffs) {
    if (coeffs.size() != grid->coeff_count()) {
        Vector c = Vector::Zero(grid->coeff_count());
        c.head(std::min(c.size(), coeffs.size())) =
            coeffs.head(std::min(c.size(), coeffs.size()));
        coeffs = std::move(c);
    }
    Vector values = synthesize(*grid, coeffs);
    return {std::move(grid), std::move(values), std::move(coeffs)};
}

SphereField SphereField::constant(GridPtr grid, Real value) {
    Vector c = Vector::Zero(grid->coeff_count());
    c[0] = value * std::sqrt(4.0 * kPi);
    return from_coeffs(std::move(grid), std::move(c));
}

SphereField SphereField::coordinate(GridPtr grid, int i) {
    Vector c = Vector::Zero(grid->coeff_count());
    const Real s = std::sqrt(4.0 * kPi / 3.0);
    if (i == 1) c[SphereGrid::coeff_index(1, 1)] = s;
    else if (i == 2) c[SphereGrid::coeff_index(1, -1)] = s;
    else if (i == 3) c[SphereGrid::coeff_index(1, 0)] = s;
    else throw DomainError("coordinate index must be 1, 2 or 3");
    return from_coeffs(std::move(grid), std::move(c));
}

SphereField SphereField::harmonic(GridPtr grid, int l, int m) {
    if (l > grid->bandlimit() || std::abs(m) > l)
        throw DomainError("harmonic exceeds the grid bandlimit");
    Vector c = Vector::Zero(grid->coeff_count());
    c[SphereGrid::coeff_index(l, m)] = 1.0;
    return from_coeffs(std::move(grid), std::move(c));
}

Real SphereField::eval(Real theta, Real phi) const {
    const int L = grid_->bandlimit();
    const Real x = std::cos(theta);
    std::vector<Real> row(L + 1);
    Real out = 0.0;
    for (int m = 0; m <= L; ++m) {
        SphereGrid::legendre_row(L, m, x, row.data());
        Real pc = 0.0, ps = 0.0;
        for (int l = m; l <= L; ++l) {
            pc += coeffs_[SphereGrid::coeff_index(l, m)] * row[l - m];
            if (m > 0) ps += coeffs_[SphereGrid::coeff_index(l, -m)] * row[l - m];
        }
        if (m == 0) out += pc * kInvSqrt2Pi;
        else out += (pc * std::cos(m * phi) + ps * std::sin(m * phi)) * kInvSqrtPi;
    }
    return out;
}

Real SphereField::eval_dtheta(Real theta, Real phi) const {
    const int L = grid_->bandlimit();
    const Real x = std::cos(theta);
    const Real s = std::sin(theta);
    std::vector<Real> row(L + 1);
    Real out = 0.0;
    for (int m = 0; m <= L; ++m) {
        SphereGrid::legendre_row(L, m, x, row.data());
        Real pc = 0.0, ps = 0.0;
        for (int l = m; l <= L; ++l) {
            // dPbar_lm/dth = (l x Pbar_l - e_lm Pbar_{l-1}) / sin th
            const Real e = (l > m) ? std::sqrt((Real(l) * l - Real(m) * m) *
                                               (2.0 * l + 1.0) / (2.0 * l - 1.0))
                                   : 0.0;
            const Real prev = (l > m) ? row[l - 1 - m] : 0.0;
            const Real dp = (l * x * row[l - m] - e * prev) / s;
            pc += coeffs_[SphereGrid::coeff_index(l, m)] * dp;
            if (m > 0) ps += coeffs_[SphereGrid::coeff_index(l, -m)] * dp;
        }
        if (m == 0) out += pc * kInvSqrt2Pi;
        else out += (pc * std::cos(m * phi) + ps * std::sin(m * phi)) * kInvSqrtPi;
    }
    return out;
}

Real SphereField::eval_dphi(Real theta, Real phi) const {
    const int L = grid_->bandlimit();
    const Real x = std::cos(theta);
    std::vector<Real> row(L + 1);
    Real out = 0.0;
    for (int m = 1; m <= L; ++m) {
        SphereGrid::legendre_row(L, m, x, row.data());
        Real pc = 0.0, ps = 0.0;
        for (int l = m; l <= L; ++l) {
            pc += coeffs_[SphereGrid::coeff_index(l, m)] * row[l - m];
            ps += coeffs_[SphereGrid::coeff_index(l, -m)] * row[l - m];
        }
        out += m * (ps * std::cos(m * phi) - pc * std::sin(m * phi)) * kInvSqrtPi;
    }
    return out;
}

SphereField resample(const SphereField& u, GridPtr target) {
    return SphereField::from_coeffs(std::move(target), u.coeffs());
}

SphereField laplacian(const SphereField& u) {
    const int L = u.grid()->bandlimit();
    Vector c = u.coeffs();
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) c[SphereGrid::coeff_index(l, m)] *= -Real(l) * (l + 1);
    return SphereField::from_coeffs(u.grid(), std::move(c));
}

GradientField gradient(const SphereField& u) {
    const SphereGrid& g = *u.grid();
    GradientField out;
    out.grid = u.grid();
    out.d_theta = synthesize_table(g, u.coeffs(), g.legendre_dtheta(), false);
    Vector dph = synthesize_table(g, u.coeffs(), g.legendre(), true);
    out.d_phi.resize(g.n_nodes());
    for (int i = 0; i < g.n_theta(); ++i)
        out.d_phi.segment(Index(i) * g.n_phi(), g.n_phi()) =
            dph.segment(Index(i) * g.n_phi(), g.n_phi()) / g.sin_theta()[i];
    return out;
}

HessianField hessian(const SphereField& u) {
    const SphereGrid& g = *u.grid();
    HessianField out;
    out.grid = u.grid();
    Vector u_t = synthesize_table(g, u.coeffs(), g.legendre_dtheta(), false);
    Vector u_p = synthesize_table(g, u.coeffs(), g.legendre(), true);
    Vector u_tt = synthesize_table(g, u.coeffs(), g.legendre_d2theta(), false);
    Vector u_tp = synthesize_table(g, u.coeffs(), g.legendre_dtheta(), true);
    Vector u_pp(g.n_nodes());
    {
        // second phi derivative: multiply coefficients by -m^2
        const int L = g.bandlimit();
        Vector c = u.coeffs();
        for (int l = 0; l <= L; ++l)
            for (int m = -l; m <= l; ++m)
                c[SphereGrid::coeff_index(l, m)] *= -Real(m) * m;
        u_pp = synthesize(g, c);
    }
    out.tt = u_tt;
    out.tp.resize(g.n_nodes());
    out.pp.resize(g.n_nodes());
    for (int i = 0; i < g.n_theta(); ++i) {
        const Real s = g.sin_theta()[i];
        const Real cot = g.cos_theta()[i] / s;
        for (int j = 0; j < g.n_phi(); ++j) {
            Index k = g.node(i, j);
            // Hess(e_th, e_ph) = (d_th d_ph u - cot th d_ph u) / sin th
            out.tp[k] = (u_tp[k] - cot * u_p[k]) / s;
            // Hess(e_ph, e_ph) = d_ph^2 u / sin^2 th + cot th d_th u
            out.pp[k] = u_pp[k] / (s * s) + cot * u_t[k];
        }
    }
    return out;
}

SphereField traceless_hessian_normsq(const SphereField& u, int d) {
    HessianField h = hessian(u);
    SphereField lap = laplacian(u);
    Vector v(u.grid()->n_nodes());
    for (Index k = 0; k < v.size(); ++k) {
        Real tr_over_d = lap.values()[k] / d;
        Real a = h.tt[k] - tr_over_d;
        Real b = h.pp[k] - tr_over_d;
        v[k] = a * a + b * b + 2.0 * h.tp[k] * h.tp[k];
    }
    return SphereField::from_values(u.grid(), std::move(v));
}

Real integrate_values(const SphereGrid& grid, const Vector& values) {
    Real total = 0.0;
    for (int i = 0; i < grid.n_theta(); ++i) {
        Real row = 0.0;
        for (int j = 0; j < grid.n_phi(); ++j) row += values[grid.node(i, j)];
        total += grid.gl_weights()[i] * row;
    }
    return total * 2.0 * kPi / grid.n_phi();
}

Real integrate(const SphereField& u) { return integrate_values(*u.grid(), u.values()); }

SphereField project_low_modes(const SphereField& u) {
    Vector c = Vector::Zero(u.coeffs().size());
    for (int idx = 0; idx < 4 && idx < c.size(); ++idx) c[idx] = u.coeffs()[idx];
    return SphereField::from_coeffs(u.grid(), std::move(c));
}

Real low_mode_distance(const SphereField& u) {
    const Real total = u.coeffs().squaredNorm();
    if (total == 0.0) return 0.0;
    // direct tail sum; subtracting from the total would turn exactly-low
    // fields into sqrt(roundoff)
    Real high = 0.0;
    for (Index idx = 4; idx < u.coeffs().size(); ++idx)
        high += u.coeffs()[idx] * u.coeffs()[idx];
    return std::sqrt(high / total);
}

SphereField multiply(const SphereField& a, const SphereField& b) {
    if (a.grid() != b.grid()) throw DomainError("multiply: fields on different grids");
    Vector v = a.values().array() * b.values().array();
    return SphereField::from_values(a.grid(), std::move(v));
}

}  // namespace nullcone
