#pragma once

#include <cmath>
#include <random>

#include "nullcone/nullcone_surface.hpp"
#include "nullcone/sphere_field.hpp"

namespace nullcone::testing {

/// Band-limited random field with decaying spectrum, content at l <= lmax.
inline SphereField random_field(GridPtr grid, int lmax, std::mt19937_64& rng,
                                Real amp = 1.0) {
    std::normal_distribution<Real> gauss(0.0, 1.0);
    Vector c = Vector::Zero(grid->coeff_count());
    for (int l = 0; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m)
            c[SphereGrid::coeff_index(l, m)] = amp * gauss(rng) / (1.0 + l * l);
    return SphereField::from_coeffs(std::move(grid), std::move(c));
}

/// Surface with profile r = r0 (1 + amp * random l<=4 field). The amplitude
/// must stay small enough that the mean curvature remains spacelike: the
/// u Lap u terms scale like l(l+1) amp, so amp ~ a few percent keeps
/// hsq > 0 with margin and the derived fields spectrally tame.
inline NullConeSurface random_surface(const WarpingModel& model, Real w0, Real r0,
                                      int bandlimit, std::mt19937_64& rng,
                                      Real amp = 0.03) {
    GridPtr grid = SphereGrid::dealiased(bandlimit);
    SphereField pert = random_field(grid, 4, rng, 1.0);
    const Real norm = pert.values().cwiseAbs().maxCoeff();
    Vector r_values =
        r0 * (Vector::Ones(grid->n_nodes()) + (amp / norm) * pert.values());
    SphereField u = SphereField::from_values(grid, r_values.cwiseInverse());
    return NullConeSurface(model, w0, std::move(u));
}

inline Real one_form_max(const OneForm& f) {
    Real m = 0.0;
    for (Index k = 0; k < f.comp_theta.size(); ++k)
        m = std::max(m, std::hypot(f.comp_theta[k], f.comp_phi[k]));
    return m;
}

}  // namespace nullcone::testing
