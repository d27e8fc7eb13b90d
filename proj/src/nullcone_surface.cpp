#include "nullcone/nullcone_surface.hpp"

#include <cmath>
#include <sstream>

#include "nullcone/curvature.hpp"

namespace nullcone {

namespace {

Vector pointwise(const Vector& r, const std::function<Real(Real)>& f) {
    Vector out(r.size());
    for (Index k = 0; k < r.size(); ++k) out[k] = f(r[k]);
    return out;
}

void validate_profile(const WarpingModel& model, const Vector& r_values) {
    std::ostringstream bad;
    int count = 0;
    for (Index k = 0; k < r_values.size(); ++k) {
        if (!(r_values[k] > 0.0) || !model.interior(r_values[k])) {
            if (count < 8) bad << (count ? ", " : "") << k;
            ++count;
        }
    }
    if (count > 0)
        throw DomainError("surface profile leaves the model domain at " +
                          std::to_string(count) + " node(s): [" + bad.str() + "]");
}

}  // namespace

NullConeSurface::NullConeSurface(WarpingModel model, Real w0, SphereField u)
    : model_(std::move(model)),
      w0_(w0),
      // canonicalize: the stored profile is exactly band-limited, so grid
      // values and spectral derivatives describe the same function
      u_(SphereField::from_coeffs(u.grid(), u.coeffs())),
      r_(SphereField::from_values(u_.grid(), u_.values().cwiseInverse())) {
    validate_profile(model_, r_.values());
    fsq_ = pointwise(r_.values(), [this](Real r) { return model_.fsq(r); });
    ffp_ = pointwise(r_.values(), [this](Real r) { return model_.ffp(r); });
    v_ = pointwise(r_.values(),
                   [this](Real r) { return 2.0 * canonical_tortoise(model_, r) + w0_; });
    grad_r_ = gradient(r_);
    grad_u_ = gradient(u_);
    lap_r_ = laplacian(r_).values();
    lap_u_ = laplacian(u_).values();
}

NullConeSurface NullConeSurface::from_radius(WarpingModel model, Real w0, SphereField r) {
    SphereField u = SphereField::from_values(r.grid(), r.values().cwiseInverse());
    return NullConeSurface(std::move(model), w0, std::move(u));
}

NullFrame frame(const NullConeSurface& s) {
    const SphereGrid& g = *s.grid();
    const Index n = g.n_nodes();
    NullFrame out;
    out.grid = s.grid();
    out.L = Matrix::Zero(n, 4);
    out.Lbar = Matrix::Zero(n, 4);
    out.T_theta = Matrix::Zero(n, 4);
    out.T_phi = Matrix::Zero(n, 4);
    for (int i = 0; i < g.n_theta(); ++i) {
        const Real sth = g.sin_theta()[i];
        for (int j = 0; j < g.n_phi(); ++j) {
            const Index k = g.node(i, j);
            const Real r = s.r().values()[k];
            const Real f2 = s.fsq()[k];
            // Coordinate partials of r: grad_r holds orthonormal components.
            const Real r_th = s.grad_r().d_theta[k];
            const Real r_ph_coord = s.grad_r().d_phi[k] * sth;  // d r / d phi
            const Real gradr_sq =
                s.grad_r().d_theta[k] * s.grad_r().d_theta[k] +
                s.grad_r().d_phi[k] * s.grad_r().d_phi[k];

            out.L(k, 0) = 2.0 * r / f2;

            // Lbar = A d_v + B d_w + V^a d_a with
            //   A = 2 |grad r|^2 / (f^2 r^3), B = 2/r, V^a = 2 grad^a r / r^3.
            out.Lbar(k, 0) = 2.0 * gradr_sq / (f2 * r * r * r);
            out.Lbar(k, 1) = 2.0 / r;
            out.Lbar(k, 2) = 2.0 * r_th / (r * r * r);
            out.Lbar(k, 3) = 2.0 * r_ph_coord / (sth * sth * r * r * r);

            // dF/da = v_a d_v + d_a, v_a = (2/f^2) d_a r.
            out.T_theta(k, 0) = 2.0 * r_th / f2;
            out.T_theta(k, 2) = 1.0;
            out.T_phi(k, 0) = 2.0 * r_ph_coord / f2;
            out.T_phi(k, 3) = 1.0;
        }
    }
    return out;
}

Real ef_pairing(const NullConeSurface& s, Index k, const Eigen::Vector4d& X,
                const Eigen::Vector4d& Y) {
    const SphereGrid& g = *s.grid();
    const int i = static_cast<int>(k / g.n_phi());
    const Real r = s.r().values()[k];
    const Real f2 = s.fsq()[k];
    const Real sth = g.sin_theta()[i];
    return -0.5 * f2 * (X[0] * Y[1] + X[1] * Y[0]) + r * r * X[2] * Y[2] +
           r * r * sth * sth * X[3] * Y[3];
}

SphereField tr_chi_bar(const NullConeSurface& s) {
    const int n = s.model().dimension();
    const Index nn = s.grid()->n_nodes();
    Vector out(nn);
    for (Index k = 0; k < nn; ++k) {
        const Real r = s.r().values()[k];
        const Real gradr_sq = s.grad_r().d_theta[k] * s.grad_r().d_theta[k] +
                              s.grad_r().d_phi[k] * s.grad_r().d_phi[k];
        // sigma = r^2 sigma~:  |grad r|^2_sigma = |grad~ r|^2 / r^2,
        // Lap_sigma r = (Lap~ r + (n-3) |grad~ r|^2 / r) / r^2.
        const Real grad_sigma = gradr_sq / (r * r);
        const Real lap_sigma = (s.lap_r()[k] + (n - 3) * gradr_sq / r) / (r * r);
        out[k] = -((n - 1) * (s.fsq()[k] + grad_sigma) - 2.0 * r * lap_sigma) / (r * r);
    }
    return SphereField::from_values(s.grid(), std::move(out));
}

std::pair<SphereField, SphereField> hsq_two_routes(const NullConeSurface& s) {
    const int n = s.model().dimension();
    SphereField sigma_route =
        SphereField::from_values(s.grid(), -tr_chi_bar(s).values());
    const Index nn = s.grid()->n_nodes();
    Vector out(nn);
    for (Index k = 0; k < nn; ++k) {
        const Real u = s.u().values()[k];
        const Real gradu_sq = s.grad_u().d_theta[k] * s.grad_u().d_theta[k] +
                              s.grad_u().d_phi[k] * s.grad_u().d_phi[k];
        out[k] = (n - 1) * s.fsq()[k] * u * u - (n - 1) * gradu_sq +
                 2.0 * u * s.lap_u()[k];
    }
    return {SphereField::from_values(s.grid(), std::move(out)), std::move(sigma_route)};
}

SphereField hsq(const NullConeSurface& s) { return hsq_two_routes(s).first; }

MeanCurvatureResult mean_curvature_vector(const NullConeSurface& s) {
    NullFrame fr = frame(s);
    MeanCurvatureResult out{s.grid(), Matrix(), Vector(), hsq(s), 0.0, false};
    const Index nn = s.grid()->n_nodes();
    out.H.resize(nn, 4);
    out.inner.resize(nn);
    Real ratio_num = 0.0, ratio_den = 0.0;
    for (Index k = 0; k < nn; ++k) {
        const Real E = out.hsq.values()[k];
        if (!(E > 1e-14)) out.degenerate = true;
        const Real psi = -0.25 * E;
        Eigen::Vector4d H = fr.Lbar.row(k).transpose() + psi * fr.L.row(k).transpose();
        out.H.row(k) = H.transpose();
        out.inner[k] = ef_pairing(s, k, H, H);
        ratio_num += out.inner[k];
        ratio_den += E;
    }
    out.convention_ratio = ratio_den != 0.0 ? ratio_num / ratio_den : 0.0;
    return out;
}

namespace {

/// Spectral coordinate partials (d_theta, d_phi) of a smooth values-field,
/// through its band-limited analysis on the surface grid.
struct CoordDerivs {
    Vector d_theta;
    Vector d_phi;  // plain d/dphi (coordinate, not orthonormal)
};

CoordDerivs spectral_coordinate_derivs(const GridPtr& grid, const Vector& values) {
    SphereField f = SphereField::from_values(grid, values);
    GradientField gr = gradient(f);
    CoordDerivs out;
    out.d_theta = gr.d_theta;
    out.d_phi.resize(values.size());
    for (int i = 0; i < grid->n_theta(); ++i)
        for (int j = 0; j < grid->n_phi(); ++j) {
            Index k = grid->node(i, j);
            out.d_phi[k] = gr.d_phi[k] * grid->sin_theta()[i];
        }
    return out;
}

}  // namespace

OneForm alpha_H(const NullConeSurface& s) {
    const SphereGrid& g = *s.grid();
    const Index nn = g.n_nodes();
    SphereField E_field = hsq(s);
    const Vector& E = E_field.values();
    {
        std::ostringstream bad;
        int count = 0;
        for (Index k = 0; k < nn; ++k)
            if (!(E[k] > 0.0)) {
                if (count < 8) bad << (count ? ", " : "") << k;
                ++count;
            }
        if (count)
            throw NumericGuardError("mean_curvature_spacelike",
                                    "<H,H> <= 0 at node(s) [" + bad.str() + "]");
    }

    // Normal frame coefficients in the (L, Lbar) basis:
    //   e_n = -H/|H| = p L + q Lbar,  e_{n+1} = J/|H| = pt L + qt Lbar
    // with p = sqrt(E)/4, q = -1/sqrt(E), pt = p, qt = -q. All four are
    // smooth scalars, so spectral differentiation is pole-safe.
    Vector p(nn), q(nn);
    for (Index k = 0; k < nn; ++k) {
        const Real sq = std::sqrt(E[k]);
        p[k] = 0.25 * sq;
        q[k] = -1.0 / sq;
    }
    CoordDerivs dp = spectral_coordinate_derivs(s.grid(), p);
    CoordDerivs dq = spectral_coordinate_derivs(s.grid(), q);

    // P_a = <D_a L, Lbar>, differentiated honestly: L = Lv d_v with
    // Lv = 2r/f^2 analyzed and differentiated spectrally, plus the EF
    // Christoffel terms along dF/da.
    Vector Lv(nn);
    for (Index k = 0; k < nn; ++k) Lv[k] = 2.0 * s.r().values()[k] / s.fsq()[k];
    CoordDerivs dLv = spectral_coordinate_derivs(s.grid(), Lv);

    OneForm out;
    out.grid = s.grid();
    out.comp_theta.resize(nn);
    out.comp_phi.resize(nn);
    for (int i = 0; i < g.n_theta(); ++i) {
        const Real sth = g.sin_theta()[i];
        for (int j = 0; j < g.n_phi(); ++j) {
            const Index k = g.node(i, j);
            const Real r = s.r().values()[k];
            const Real f2 = s.fsq()[k];
            const Real ffp = s.ffp()[k];
            const Real r_th = s.grad_r().d_theta[k];
            const Real r_ph = s.grad_r().d_phi[k] * sth;  // coordinate d_phi r

            // <d_v, Lbar> = -f^2/r, <d_th^a, Lbar> = (2/r) d_a r.
            const Real pair_dv_Lbar = -f2 / r;
            auto P_comp = [&](Real dLv_a, Real r_a, Real pair_dtheta_a) {
                const Real v_a = 2.0 * r_a / f2;
                // D_a L = [d_a Lv + Lv v_a ff'] d_v + (Lv f^2 / 2r) d_a
                const Real dv_coeff = dLv_a + Lv[k] * v_a * ffp;
                const Real tangential = Lv[k] * f2 / (2.0 * r);
                return dv_coeff * pair_dv_Lbar + tangential * pair_dtheta_a;
            };
            const Real P_th = P_comp(dLv.d_theta[k], r_th, 2.0 * r_th / r);
            const Real P_ph = P_comp(dLv.d_phi[k], r_ph, 2.0 * r_ph / r);

            // alpha_a = -2 qt d_a p - 2 pt d_a q + (p qt - q pt) <D_a L, Lbar>
            // (uses metricity <D_a Lbar, L> = -<D_a L, Lbar>).
            const Real pt = p[k], qt = -q[k];
            const Real cross = p[k] * qt - q[k] * pt;  // = 1/2 analytically
            out.comp_theta[k] =
                -2.0 * qt * dp.d_theta[k] - 2.0 * pt * dq.d_theta[k] + cross * P_th;
            out.comp_phi[k] =
                (-2.0 * qt * dp.d_phi[k] - 2.0 * pt * dq.d_phi[k] + cross * P_ph) / sth;
        }
    }
    return out;
}

OneForm cnnc_residual(const NullConeSurface& s) {
    OneForm a = alpha_H(s);
    SphereField E_field = hsq(s);
    CoordDerivs dE = spectral_coordinate_derivs(s.grid(), E_field.values());
    const SphereGrid& g = *s.grid();
    OneForm out;
    out.grid = s.grid();
    out.comp_theta.resize(g.n_nodes());
    out.comp_phi.resize(g.n_nodes());
    for (int i = 0; i < g.n_theta(); ++i)
        for (int j = 0; j < g.n_phi(); ++j) {
            const Index k = g.node(i, j);
            const Real E = E_field.values()[k];
            // d log |H| = d E / (2E)
            out.comp_theta[k] = a.comp_theta[k] + dE.d_theta[k] / (2.0 * E);
            out.comp_phi[k] =
                a.comp_phi[k] + dE.d_phi[k] / (g.sin_theta()[i] * 2.0 * E);
        }
    return out;
}

namespace {

void require_kind(const NullConeSurface& s, SpacetimeKind kind, const char* what) {
    if (s.model().kind() != kind)
        throw DomainError(std::string(what) + " requires a " +
                          to_string(kind) + " model");
}

}  // namespace

std::pair<SphereField, SphereField> killing_pairing(const NullConeSurface& s,
                                                    KillingFamily which, int axis) {
    const Index nn = s.grid()->n_nodes();
    const Real l = s.model().radius_l();
    SphereField X = (which == KillingFamily::TimeTranslation)
                        ? SphereField::constant(s.grid(), 1.0)
                        : SphereField::coordinate(s.grid(), axis);
    Vector computed(nn), closed(nn);
    for (Index k = 0; k < nn; ++k) {
        const Real r = s.r().values()[k];
        const Real f2 = s.fsq()[k];
        const Real xi = X.values()[k];
        // Static-patch components K = A d_t + B d_r + (orbit part); the orbit
        // part drops out of <., L> exactly. t on the surface from the
        // canonical tortoise gauge.
        const Real t = 0.5 * (s.advanced_time()[k] + s.w0());
        Real A = 0.0, B = 0.0;
        switch (which) {
            case KillingFamily::TimeTranslation:
                A = 1.0;
                B = 0.0;
                closed[k] = -r;
                break;
            case KillingFamily::MinkowskiBoost:
                require_kind(s, SpacetimeKind::Minkowski, "MinkowskiBoost");
                A = r * xi;
                B = t * xi;
                closed[k] = r * s.w0() * xi;
                break;
            case KillingFamily::AdSBoost:
                require_kind(s, SpacetimeKind::AntiDeSitter, "AdSBoost");
                A = r * xi / std::sqrt(f2) * std::cos(t / l);
                B = l * std::sqrt(f2) * xi * std::sin(t / l);
                closed[k] = r * l * std::sin(s.w0() / l) * xi;
                break;
            case KillingFamily::AdSBoostPrime:
                require_kind(s, SpacetimeKind::AntiDeSitter, "AdSBoostPrime");
                A = -r * xi / std::sqrt(f2) * std::sin(t / l);
                B = l * std::sqrt(f2) * xi * std::cos(t / l);
                closed[k] = r * l * std::cos(s.w0() / l) * xi;
                break;
            case KillingFamily::DeSitterBoost:
                require_kind(s, SpacetimeKind::DeSitter, "DeSitterBoost");
                A = r * xi / std::sqrt(f2) * std::cosh(t / l);
                B = l * std::sqrt(f2) * xi * std::sinh(t / l);
                closed[k] = r * l * std::sinh(s.w0() / l) * xi;
                break;
        }
        // <K, L> = K^w <d_w, L> = -r (A - B/f^2).
        computed[k] = -r * (A - B / f2);
    }
    return {SphereField::from_values(s.grid(), std::move(computed)),
            SphereField::from_values(s.grid(), std::move(closed))};
}

NullConeSurface boost_sphere(const WarpingModel& model, Real w0, Real r0, Real beta,
                             int axis, int bandlimit) {
    if (!model.is_space_form())
        throw DomainError("boost_sphere requires a space-form model");
    model.require_interior(r0);
    GridPtr grid = SphereGrid::dealiased(bandlimit);
    Vector c = Vector::Zero(grid->coeff_count());
    const Real a = std::cosh(beta) / r0;
    const Real b = -std::sinh(beta) / r0;
    c[0] = a * std::sqrt(4.0 * kPi);
    const Real s13 = std::sqrt(4.0 * kPi / 3.0);
    if (axis == 1) c[SphereGrid::coeff_index(1, 1)] = b * s13;
    else if (axis == 2) c[SphereGrid::coeff_index(1, -1)] = b * s13;
    else if (axis == 3) c[SphereGrid::coeff_index(1, 0)] = b * s13;
    else throw DomainError("boost axis must be 1, 2 or 3");
    return NullConeSurface(model, w0, SphereField::from_coeffs(grid, std::move(c)));
}

std::variant<BoostFit, NotLowMode> fit_boosted_sphere(const SphereField& u, Real tol) {
    const Real dist = low_mode_distance(u);
    if (dist >= tol) return NotLowMode{dist};
    const Real inv = 1.0 / std::sqrt(4.0 * kPi);
    const Real a = u.coeffs()[0] * inv;
    const Real s31 = std::sqrt(3.0 / (4.0 * kPi));
    Vec3 b{u.coeff(1, 1) * s31, u.coeff(1, -1) * s31, u.coeff(1, 0) * s31};
    const Real bn = b.norm();
    if (!(a > bn))
        throw DomainError("profile not a boosted sphere: a <= |b| (u not positive)");
    BoostFit fit;
    fit.r0 = 1.0 / std::sqrt(a * a - bn * bn);
    fit.beta = std::atanh(bn / a);
    fit.degenerate_axis = bn < tol * a;
    fit.axis = fit.degenerate_axis ? Vec3{0, 0, 1} : Vec3(-b / bn);
    return fit;
}

// ---------------------------------------------------------------------------

ZonalSurface::ZonalSurface(WarpingModel model, Real w0, ZonalField u)
    : model_(std::move(model)),
      w0_(w0),
      u_(std::move(u)),
      r_(ZonalField::from_values(u_.grid(), u_.values().cwiseInverse())) {
    for (int i = 0; i < r_.grid()->n_nodes(); ++i)
        if (!(r_.values()[i] > 0.0) || !model_.interior(r_.values()[i]))
            throw DomainError("zonal profile leaves the model domain");
    fsq_.resize(r_.grid()->n_nodes());
    ffp_.resize(r_.grid()->n_nodes());
    for (int i = 0; i < r_.grid()->n_nodes(); ++i) {
        fsq_[i] = model_.fsq(r_.values()[i]);
        ffp_[i] = model_.ffp(r_.values()[i]);
    }
}

Vector zonal_hsq(const ZonalSurface& s) {
    const int n = s.n();
    const ZonalGrid& g = *s.u().grid();
    Vector up = zonal_dtheta(s.u());
    Vector lap = zonal_laplacian(s.u()).values();
    Vector out(g.n_nodes());
    for (int i = 0; i < g.n_nodes(); ++i) {
        const Real u = s.u().values()[i];
        out[i] = (n - 1) * s.fsq()[i] * u * u - (n - 1) * up[i] * up[i] +
                 2.0 * u * lap[i];
    }
    return out;
}

}  // namespace nullcone
