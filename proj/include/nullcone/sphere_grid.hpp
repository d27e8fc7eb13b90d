#pragma once

#include <memory>
#include <vector>

#include "nullcone/types.hpp"

namespace nullcone {

/// Gauss-Legendre x uniform-longitude grid on S^2 with real orthonormal
/// spherical-harmonic tables up to a bandlimit L.
///
/// Conventions (fixed for all file formats):
///   Y_{l,0}   = Pbar_{l,0}(cos th) / sqrt(2 pi)
///   Y_{l,m>0} = Pbar_{l,m}(cos th) cos(m ph) / sqrt(pi)
///   Y_{l,m<0} = Pbar_{l,|m|}(cos th) sin(|m| ph) / sqrt(pi)
/// where Pbar are the [-1,1]-orthonormal associated Legendre functions
/// WITHOUT the Condon-Shortley phase, so that
///   X^1 = sin th cos ph = sqrt(4 pi / 3) Y_{1,1}
///   X^2 = sin th sin ph = sqrt(4 pi / 3) Y_{1,-1}
///   X^3 = cos th        = sqrt(4 pi / 3) Y_{1,0}.
/// Coefficients are stored flat at index l^2 + l + m.
class SphereGrid {
public:
    /// n_theta >= L+1 and n_phi >= 2L+1 are required (quadrature exactness).
    /// Defaults: n_theta = L+1, n_phi = 2L+1.
    explicit SphereGrid(int bandlimit, int n_theta = 0, int n_phi = 0);

    /// Grid sized for products of band-L fields up to cubic degree:
    /// n_theta = ceil(3L/2)+1, n_phi = 3L+1, analysis bandlimit L.
    static std::shared_ptr<const SphereGrid> dealiased(int bandlimit);
    static std::shared_ptr<const SphereGrid> standard(int bandlimit);

    int bandlimit() const { return L_; }
    int n_theta() const { return n_theta_; }
    int n_phi() const { return n_phi_; }
    Index n_nodes() const { return Index(n_theta_) * n_phi_; }
    int coeff_count() const { return (L_ + 1) * (L_ + 1); }
    static int coeff_index(int l, int m) { return l * l + l + m; }

    const Vector& cos_theta() const { return x_; }
    const Vector& theta() const { return theta_; }
    const Vector& sin_theta() const { return sin_theta_; }
    const Vector& phi() const { return phi_; }
    /// Gauss-Legendre weights in cos(theta) (no 2 pi / n_phi factor).
    const Vector& gl_weights() const { return w_; }
    /// Full 2D quadrature weight of node (i,j): w_i * 2 pi / n_phi.
    Real node_weight(int i) const { return w_[i] * 2.0 * kPi / n_phi_; }
    /// Flattened node index, theta-major.
    Index node(int i, int j) const { return Index(i) * n_phi_ + j; }

    // Normalized Legendre tables at the grid colatitudes; column order is
    // l = m..L for each m (see column_offset).
    const Matrix& legendre() const { return P_; }
    const Matrix& legendre_dtheta() const { return dP_; }
    const Matrix& legendre_d2theta() const { return d2P_; }
    int column_offset(int m) const { return col_offset_[m]; }

    // Longitude tables: cos(m phi_j), sin(m phi_j), (n_phi x (L+1)).
    const Matrix& cos_table() const { return cosm_; }
    const Matrix& sin_table() const { return sinm_; }

    /// Pbar_{l,m}(x) for a single point, l = m..lmax (on-the-fly recurrence).
    static void legendre_row(int lmax, int m, Real x, Real* out);

private:
    int L_, n_theta_, n_phi_;
    Vector x_, w_, theta_, sin_theta_, phi_;
    Matrix P_, dP_, d2P_;
    Matrix cosm_, sinm_;
    std::vector<int> col_offset_;
};

}  // namespace nullcone
