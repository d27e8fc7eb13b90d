#include "nullcone/sphere_grid.hpp"

#include <cmath>

#include "nullcone/quadrature.hpp"

namespace nullcone {

SphereGrid::SphereGrid(int bandlimit, int n_theta, int n_phi)
    : L_(bandlimit),
      n_theta_(n_theta > 0 ? n_theta : bandlimit + 1),
      n_phi_(n_phi > 0 ? n_phi : 2 * bandlimit + 1) {
    if (L_ < 0) throw DomainError("bandlimit must be nonnegative");
    if (n_theta_ < L_ + 1 || n_phi_ < 2 * L_ + 1)
        throw DomainError("grid too small for the requested bandlimit");

    QuadRule gl = gauss_legendre(n_theta_);
    x_ = gl.x;
    w_ = gl.w;
    theta_.resize(n_theta_);
    sin_theta_.resize(n_theta_);
    for (int i = 0; i < n_theta_; ++i) {
        theta_[i] = std::acos(x_[i]);
        sin_theta_[i] = std::sqrt(1.0 - x_[i] * x_[i]);
    }
    phi_.resize(n_phi_);
    for (int j = 0; j < n_phi_; ++j) phi_[j] = 2.0 * kPi * j / n_phi_;

    // Column layout: m = 0..L, within each m the degrees l = m..L.
    col_offset_.resize(L_ + 2);
    int cols = 0;
    for (int m = 0; m <= L_; ++m) {
        col_offset_[m] = cols;
        cols += L_ + 1 - m;
    }
    col_offset_[L_ + 1] = cols;

    P_.resize(n_theta_, cols);
    dP_.resize(n_theta_, cols);
    d2P_.resize(n_theta_, cols);
    for (int i = 0; i < n_theta_; ++i) {
        const Real x = x_[i];
        const Real s = sin_theta_[i];
        // Diagonal recurrence (no Condon-Shortley phase).
        Real pmm = std::sqrt(0.5);
        for (int m = 0; m <= L_; ++m) {
            if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
            Real plm2 = 0.0, plm1 = pmm;
            for (int l = m; l <= L_; ++l) {
                Real p;
                if (l == m) {
                    p = pmm;
                } else {
                    Real a = std::sqrt((2.0 * l - 1.0) * (2.0 * l + 1.0) /
                                       (Real(l - m) * (l + m)));
                    Real b = (l == m + 1)
                                 ? 0.0
                                 : std::sqrt((2.0 * l + 1.0) * (l - 1.0 - m) *
                                             (l - 1.0 + m) /
                                             ((2.0 * l - 3.0) * (l - m) * (l + m)));
                    p = a * x * plm1 - b * plm2;
                }
                int c = col_offset_[m] + (l - m);
                P_(i, c) = p;
                // dPbar/dtheta = (l x Pbar_l - e_lm Pbar_{l-1}) / sin th
                Real e = (l > m) ? std::sqrt((Real(l) * l - Real(m) * m) *
                                             (2.0 * l + 1.0) / (2.0 * l - 1.0))
                                 : 0.0;
                Real prev = (l > m) ? plm1 : 0.0;
                Real dp = (l * x * p - e * prev) / s;
                dP_(i, c) = dp;
                // Associated Legendre ODE in theta:
                // P'' = -cot th P' - (l(l+1) - m^2/sin^2 th) P
                d2P_(i, c) =
                    -(x / s) * dp - (Real(l) * (l + 1) - Real(m) * m / (s * s)) * p;
                plm2 = plm1;
                plm1 = p;
            }
        }
    }

    cosm_.resize(n_phi_, L_ + 1);
    sinm_.resize(n_phi_, L_ + 1);
    for (int j = 0; j < n_phi_; ++j)
        for (int m = 0; m <= L_; ++m) {
            cosm_(j, m) = std::cos(m * phi_[j]);
            sinm_(j, m) = std::sin(m * phi_[j]);
        }
}

std::shared_ptr<const SphereGrid> SphereGrid::dealiased(int bandlimit) {
    int nt = std::max((3 * bandlimit + 1) / 2 + 1, bandlimit + 1);  // ceil(3L/2)+1
    int np = std::max(3 * bandlimit + 1, 2 * bandlimit + 1);
    return std::make_shared<const SphereGrid>(bandlimit, nt, np);
}

std::shared_ptr<const SphereGrid> SphereGrid::standard(int bandlimit) {
    return std::make_shared<const SphereGrid>(bandlimit);
}

void SphereGrid::legendre_row(int lmax, int m, Real x, Real* out) {
    const Real s = std::sqrt(std::max(Real(0), 1.0 - x * x));
    Real pmm = std::sqrt(0.5);
    for (int mm = 1; mm <= m; ++mm)
        pmm *= std::sqrt((2.0 * mm + 1.0) / (2.0 * mm)) * s;
    Real plm2 = 0.0, plm1 = pmm;
    for (int l = m; l <= lmax; ++l) {
        Real p;
        if (l == m) {
            p = pmm;
        } else {
            Real a = std::sqrt((2.0 * l - 1.0) * (2.0 * l + 1.0) /
                               (Real(l - m) * (l + m)));
            Real b = (l == m + 1)
                         ? 0.0
                         : std::sqrt((2.0 * l + 1.0) * (l - 1.0 - m) * (l - 1.0 + m) /
                                     ((2.0 * l - 3.0) * (l - m) * (l + m)));
            p = a * x * plm1 - b * plm2;
        }
        out[l - m] = p;
        plm2 = plm1;
        plm1 = p;
    }
}

}  // namespace nullcone
