#include "nullcone/cmc.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "nullcone/parallel.hpp"

namespace nullcone {

namespace {

GridPtr work_grid(const CmcProblem& p) {
    if (p.grid) return p.grid;
    return SphereGrid::dealiased(p.bandlimit);
}

void require_admissible(const WarpingModel& model, const Vector& u_values) {
    std::ostringstream bad;
    int count = 0;
    for (Index k = 0; k < u_values.size(); ++k) {
        const Real u = u_values[k];
        if (!(u > 0.0) || !model.interior(1.0 / u)) {
            if (count < 8) bad << (count ? ", " : "") << k;
            ++count;
        }
    }
    if (count)
        throw DomainError("u not positive / 1/u outside the model domain at " +
                          std::to_string(count) + " node(s): [" + bad.str() + "]");
}

bool admissible(const WarpingModel& model, const Vector& u_values) {
    for (Index k = 0; k < u_values.size(); ++k) {
        const Real u = u_values[k];
        if (!(u > 0.0) || !model.interior(1.0 / u)) return false;
    }
    return true;
}

Vector hsq_residual_values(const CmcProblem& p, const SphereField& u) {
    const int n = p.model.dimension();
    GradientField du = gradient(u);
    Vector lap = laplacian(u).values();
    Vector out(u.values().size());
    for (Index k = 0; k < out.size(); ++k) {
        const Real uv = u.values()[k];
        const Real f2 = p.model.fsq(1.0 / uv);
        const Real gsq = du.d_theta[k] * du.d_theta[k] + du.d_phi[k] * du.d_phi[k];
        out[k] = (n - 1) * f2 * uv * uv - (n - 1) * gsq + 2.0 * uv * lap[k] -
                 p.target_E;
    }
    return out;
}

}  // namespace

SphereField hsq_residual(const CmcProblem& problem, const SphereField& u) {
    require_admissible(problem.model, u.values());
    return SphereField::from_values(u.grid(), hsq_residual_values(problem, u));
}

SphereField liouville_residual(const SphereField& u, Real E) {
    GradientField du = gradient(u);
    Vector lap = laplacian(u).values();
    Vector out(u.values().size());
    for (Index k = 0; k < out.size(); ++k) {
        const Real uv = u.values()[k];
        const Real gsq = du.d_theta[k] * du.d_theta[k] + du.d_phi[k] * du.d_phi[k];
        out[k] = uv * uv + uv * lap[k] - gsq - E;
    }
    return SphereField::from_values(u.grid(), std::move(out));
}

Matrix cmc_jacobian(const CmcProblem& problem, const SphereField& u) {
    const int n = problem.model.dimension();
    const GridPtr& grid = u.grid();
    const SphereGrid& g = *grid;
    const Index nn = g.n_nodes();
    const int ncoef = (problem.bandlimit + 1) * (problem.bandlimit + 1);

    GradientField du = gradient(u);
    Vector lap = laplacian(u).values();
    Vector lin(nn);  // multiplier of h
    for (Index k = 0; k < nn; ++k) {
        const Real uv = u.values()[k];
        const Real r = 1.0 / uv;
        lin[k] = (n - 1) * (2.0 * uv * problem.model.fsq(r) - problem.model.dfsq(r)) +
                 2.0 * lap[k];
    }

    Matrix J(ncoef, ncoef);
    parallel_for(ncoef, [&](Index col) {
        const int l = static_cast<int>(std::sqrt(Real(col)));
        SphereField h =
            SphereField::from_coeffs(grid, Vector::Unit(ncoef, col));
        GradientField dh = gradient(h);
        const Real lap_h = -Real(l) * (l + 1);
        Vector col_values(nn);
        for (Index k = 0; k < nn; ++k) {
            col_values[k] = lin[k] * h.values()[k] -
                            2.0 * (n - 1) *
                                (du.d_theta[k] * dh.d_theta[k] +
                                 du.d_phi[k] * dh.d_phi[k]) +
                            2.0 * u.values()[k] * lap_h * h.values()[k];
        }
        J.col(col) = analyze(g, col_values).head(ncoef);
    });
    return J;
}

NewtonResult newton_solve(const CmcProblem& problem, const SphereField& u0) {
    GridPtr grid = work_grid(problem);
    const int ncoef = (problem.bandlimit + 1) * (problem.bandlimit + 1);
    Vector a = Vector::Zero(ncoef);
    a.head(std::min<Index>(ncoef, u0.coeffs().size())) =
        u0.coeffs().head(std::min<Index>(ncoef, u0.coeffs().size()));
    if (problem.gauge == GaugeKind::FixLowModes) {
        if (problem.pinned_low_modes.size() != 4)
            throw DomainError("FixLowModes gauge needs exactly 4 pinned coefficients");
        a.head(4) = problem.pinned_low_modes;
    }

    NewtonResult out{SphereField::from_coeffs(grid, a), 0, false, {}, false};
    require_admissible(problem.model, out.u.values());

    for (int iter = 0; iter < 50; ++iter) {
        Vector res_values = hsq_residual_values(problem, out.u);
        const Real res_max = res_values.cwiseAbs().maxCoeff();
        out.residual_history.push_back(res_max);
        if (res_max < 1e-10) {
            out.converged = true;
            out.iterations = iter;
            return out;
        }
        Vector G = analyze(*grid, res_values).head(ncoef);
        Matrix J = cmc_jacobian(problem, out.u);

        Vector step;
        if (problem.gauge == GaugeKind::FixLowModes) {
            // Solve on the l >= 2 block; pinned coefficients never move.
            const int nfree = ncoef - 4;
            Matrix Jf(nfree, nfree);
            Vector Gf(nfree);
            for (int i = 0; i < nfree; ++i) {
                Gf[i] = G[i + 4];
                for (int j = 0; j < nfree; ++j) Jf(i, j) = J(i + 4, j + 4);
            }
            Eigen::ColPivHouseholderQR<Matrix> qr(Jf);
            qr.setThreshold(1e-7);
            Vector sf;
            if (qr.rank() < nfree) {
                out.used_levenberg_marquardt = true;
                Matrix JtJ = Jf.transpose() * Jf +
                             problem.lm_lambda * problem.lm_lambda *
                                 Matrix::Identity(nfree, nfree);
                sf = JtJ.ldlt().solve(-Jf.transpose() * Gf);
            } else {
                sf = qr.solve(-Gf);
            }
            step = Vector::Zero(ncoef);
            for (int i = 0; i < nfree; ++i) step[i + 4] = sf[i];
        } else {
            Eigen::ColPivHouseholderQR<Matrix> qr(J);
            qr.setThreshold(1e-7);
            if (qr.rank() < ncoef) {
                if (problem.gauge == GaugeKind::LevenbergMarquardt) {
                    out.used_levenberg_marquardt = true;
                    Matrix JtJ = J.transpose() * J +
                                 problem.lm_lambda * problem.lm_lambda *
                                     Matrix::Identity(ncoef, ncoef);
                    step = JtJ.ldlt().solve(-J.transpose() * G);
                } else {
                    std::ostringstream os;
                    os << "Jacobian singular beyond the gauge-fixable kernel; rank "
                       << qr.rank() << " of " << ncoef
                       << ", smallest |diag(R)| = "
                       << qr.matrixR().diagonal().cwiseAbs().minCoeff();
                    throw NumericGuardError("jacobian_singular", os.str());
                }
            } else {
                step = qr.solve(-G);
            }
        }

        // Positivity / domain guard with step halving.
        Real scale = 1.0;
        bool ok = false;
        for (int half = 0; half < 25; ++half) {
            Vector trial = a + scale * step;
            SphereField u_trial = SphereField::from_coeffs(grid, trial);
            if (admissible(problem.model, u_trial.values())) {
                a = trial;
                out.u = std::move(u_trial);
                ok = true;
                break;
            }
            scale *= 0.5;
        }
        if (!ok)
            throw DomainError(
                "newton_solve: iterate left the positivity/domain region and step "
                "halving failed");
        out.iterations = iter + 1;
    }
    Vector res_values = hsq_residual_values(problem, out.u);
    out.residual_history.push_back(res_values.cwiseAbs().maxCoeff());
    out.converged = out.residual_history.back() < 1e-10;
    return out;
}

Classification classify(const SphereField& u, const WarpingModel& model, Real tol) {
    Classification out;
    const Real dist = low_mode_distance(u);
    if (dist >= tol) {
        out.kind = VerdictKind::NonRigid;
        out.distance = dist;
        return out;
    }
    auto fit = fit_boosted_sphere(u, tol);
    const BoostFit& bf = std::get<BoostFit>(fit);
    out.r0 = bf.r0;
    out.beta = bf.beta;
    out.axis = bf.axis;
    if (bf.degenerate_axis || bf.beta < tol) {
        out.kind = VerdictKind::SphereOfSymmetry;
        out.beta = 0.0;
    } else {
        out.kind = VerdictKind::LowModeBoost;
        out.theorem_violation = !model.is_space_form();
    }
    return out;
}

BochnerCheck laplacian_bochner_identity(const SphereField& u) {
    // Work on a grid able to represent the band-2L inner field exactly.
    const int L = u.grid()->bandlimit();
    GridPtr big = std::make_shared<const SphereGrid>(2 * L, 2 * L + 1, 4 * L + 1);
    SphereField ub = resample(u, big);
    GradientField du = gradient(ub);
    Vector lap = laplacian(ub).values();
    Vector lap2 = laplacian(laplacian(ub)).values();
    HessianField h = hessian(ub);

    Vector inner(big->n_nodes()), rhs(big->n_nodes());
    for (Index k = 0; k < inner.size(); ++k) {
        const Real uv = ub.values()[k];
        const Real gsq = du.d_theta[k] * du.d_theta[k] + du.d_phi[k] * du.d_phi[k];
        inner[k] = uv * uv + uv * lap[k] - gsq;
        const Real hsqn = h.tt[k] * h.tt[k] + 2.0 * h.tp[k] * h.tp[k] +
                          h.pp[k] * h.pp[k];
        rhs[k] = 2.0 * uv * lap[k] + lap[k] * lap[k] + uv * lap2[k] - 2.0 * hsqn;
    }
    // scale against the triangle-inequality magnitude of the terms so that
    // degenerate cases (both sides zero) stay well-posed
    Real term_scale = 1e-14;
    for (Index k = 0; k < big->n_nodes(); ++k) {
        const Real uv = ub.values()[k];
        const Real hsqn =
            h.tt[k] * h.tt[k] + 2.0 * h.tp[k] * h.tp[k] + h.pp[k] * h.pp[k];
        term_scale = std::max(term_scale, std::abs(2.0 * uv * lap[k]) +
                                              lap[k] * lap[k] +
                                              std::abs(uv * lap2[k]) + 2.0 * hsqn);
    }
    SphereField lhs = laplacian(SphereField::from_values(big, std::move(inner)));
    SphereField rhs_f = SphereField::from_values(big, std::move(rhs));
    const Real scale = std::max({lhs.values().cwiseAbs().maxCoeff(),
                                 rhs_f.values().cwiseAbs().maxCoeff(), term_scale});
    Real gap = (lhs.values() - rhs_f.values()).cwiseAbs().maxCoeff() / scale;
    return {std::move(lhs), std::move(rhs_f), gap};
}

MaxPrincipleCheck max_principle_functional(const SphereField& u) {
    // Estimate E as the mean of the Liouville scalar and refuse non-solutions.
    SphereField scalar = liouville_residual(u, 0.0);
    const Real E = integrate(scalar) / (4.0 * kPi);
    const Real res = (scalar.values().array() - E).abs().maxCoeff();
    const Real scale = std::max(std::abs(E), Real(1));
    if (res > 1e-8 * scale) {
        std::ostringstream os;
        os << "input does not solve the constant-curvature equation: max residual "
           << res << " about E = " << E;
        throw NumericGuardError("not_a_solution", os.str());
    }

    MaxPrincipleCheck out{laplacian(u), 0.0, 0.0, E};
    {
        Vector v = out.lap_plus_two_u.values() + 2.0 * u.values();
        out.lap_plus_two_u = SphereField::from_values(u.grid(), std::move(v));
    }
    const Real mean = integrate(out.lap_plus_two_u) / (4.0 * kPi);
    Vector dev = out.lap_plus_two_u.values().array() - mean;
    out.constancy = std::sqrt(dev.squaredNorm() / dev.size()) /
                    std::max(std::abs(mean), Real(1e-14));

    // u Lap(Lap + 2) u = 2 |Hess u - (Lap u / 2) sigma|^2 for solutions.
    SphereField lap_u = laplacian(u);
    Vector c = lap_u.coeffs() + 2.0 * u.coeffs();
    SphereField lap_lp2 = laplacian(SphereField::from_coeffs(u.grid(), std::move(c)));
    SphereField tl = traceless_hessian_normsq(u, 2);
    Real err = 0.0;
    for (Index k = 0; k < u.values().size(); ++k)
        err = std::max(err, std::abs(u.values()[k] * lap_lp2.values()[k] -
                                     2.0 * tl.values()[k]));
    out.identity_error = err;
    return out;
}

MobiusResult mobius_conformal_factor(std::complex<Real> a, std::complex<Real> b,
                                     std::complex<Real> c, std::complex<Real> d,
                                     GridPtr grid) {
    const Real det = std::abs(a * d - b * c);
    if (det < 1e-14) throw DomainError("mobius map is degenerate (ad - bc = 0)");
    const SphereGrid& g = *grid;
    Vector uv(g.n_nodes());
    for (int i = 0; i < g.n_theta(); ++i) {
        const Real x3 = g.cos_theta()[i];
        const Real s = g.sin_theta()[i];
        for (int j = 0; j < g.n_phi(); ++j) {
            const Real x1 = s * std::cos(g.phi()[j]);
            const Real x2 = s * std::sin(g.phi()[j]);
            const std::complex<Real> z(x1 / (1.0 - x3), x2 / (1.0 - x3));
            // u = (|az+b|^2 + |cz+d|^2) / ((1+|z|^2) |ad-bc|), algebraically
            // stabilized against the pole of the projection.
            const Real zsq = std::norm(z);
            const Real num = std::norm(a) * zsq + 2.0 * std::real(a * std::conj(b) * z) +
                             std::norm(b) + std::norm(c) * zsq +
                             2.0 * std::real(c * std::conj(d) * z) + std::norm(d);
            uv[g.node(i, j)] = num / ((1.0 + zsq) * det);
        }
    }
    MobiusResult out{SphereField::from_values(std::move(grid), std::move(uv)),
                     0.0, Vector(4), Vector(4), Vector(4)};
    out.low_mode_distance = low_mode_distance(out.u);

    const Real inv = 1.0 / std::sqrt(4.0 * kPi);
    const Real s31 = std::sqrt(3.0 / (4.0 * kPi));
    out.fitted_coeffs << out.u.coeffs()[0] * inv, out.u.coeff(1, 1) * s31,
        out.u.coeff(1, -1) * s31, out.u.coeff(1, 0) * s31;

    const Real q = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    const std::complex<Real> cross = a * std::conj(b) + c * std::conj(d);
    const Real x3c = std::norm(a) + std::norm(c) - std::norm(b) - std::norm(d);
    out.printed_coeffs << q, std::real(cross), -std::imag(cross), x3c;
    out.corrected_coeffs << 0.5 * q / det, std::real(cross) / det,
        -std::imag(cross) / det, 0.5 * x3c / det;
    return out;
}

SphereField conformal_scalar_curvature(const SphereField& u, int n, Real c) {
    GradientField du = gradient(u);
    Vector lap = laplacian(u).values();
    Vector out(u.values().size());
    for (Index k = 0; k < out.size(); ++k) {
        const Real uv = u.values()[k];
        const Real gsq = du.d_theta[k] * du.d_theta[k] + du.d_phi[k] * du.d_phi[k];
        out[k] = (Real(n) * c / (n - 1)) * uv * uv + 2.0 * uv * lap[k] - n * gsq;
    }
    return SphereField::from_values(u.grid(), std::move(out));
}

Vector conformal_scalar_curvature(const ZonalField& u, int n, Real c) {
    Vector up = zonal_dtheta(u);
    Vector lap = zonal_laplacian(u).values();
    Vector out(u.values().size());
    for (Index k = 0; k < out.size(); ++k) {
        const Real uv = u.values()[k];
        out[k] = (Real(n) * c / (n - 1)) * uv * uv + 2.0 * uv * lap[k] -
                 n * up[k] * up[k];
    }
    return out;
}

namespace {

template <typename Getter>
ObataCheck obata_check_impl(Index n_nodes, int n, Real c, Getter&& get,
                            const std::function<Real(const Vector&)>& quad) {
    // get(k) returns {u, grad^2, lap, lap2, graddlap, tl_hess_sq}
    Vector lhs_d(n_nodes), tl_d(n_nodes), zero_d(n_nodes);
    for (Index k = 0; k < n_nodes; ++k) {
        auto v = get(k);
        const Real w = std::pow(v.u, 1 - n);
        const Real hess_term = -n * v.tl_hess_sq;
        const Real rest = (2 - n) * v.grad_dot_dlap + v.u * v.lap2 +
                          (Real(n) * c / (n - 1)) *
                              (v.u * v.lap + (2 - n) * v.grad_sq);
        lhs_d[k] = w * (hess_term + rest);
        tl_d[k] = w * hess_term;
        zero_d[k] = w * rest;
    }
    ObataCheck out;
    out.lhs = quad(lhs_d);
    out.traceless_term = quad(tl_d);
    out.zero_part = quad(zero_d);
    const Real scale = std::max({std::abs(out.lhs), std::abs(out.traceless_term),
                                 quad(tl_d.cwiseAbs()) * 1e-3, Real(1e-12)});
    out.gap = std::abs(out.lhs - out.traceless_term) / scale;
    return out;
}

struct ObataPoint {
    Real u, grad_sq, lap, lap2, grad_dot_dlap, tl_hess_sq;
};

}  // namespace

ObataCheck obata_weighted_identity(const SphereField& u, int n, Real c) {
    for (Index k = 0; k < u.values().size(); ++k)
        if (!(u.values()[k] > 0.0))
            throw DomainError("obata identity requires u > 0");
    GradientField du = gradient(u);
    Vector lap = laplacian(u).values();
    SphereField lap_f = laplacian(u);
    Vector lap2 = laplacian(lap_f).values();
    GradientField dlap = gradient(lap_f);
    SphereField tl = traceless_hessian_normsq(u, n);
    const SphereGrid& g = *u.grid();
    return obata_check_impl(
        g.n_nodes(), n, c,
        [&](Index k) {
            ObataPoint p;
            p.u = u.values()[k];
            p.grad_sq = du.d_theta[k] * du.d_theta[k] + du.d_phi[k] * du.d_phi[k];
            p.lap = lap[k];
            p.lap2 = lap2[k];
            p.grad_dot_dlap =
                du.d_theta[k] * dlap.d_theta[k] + du.d_phi[k] * dlap.d_phi[k];
            p.tl_hess_sq = tl.values()[k];
            return p;
        },
        [&](const Vector& v) { return integrate_values(g, v); });
}

ObataCheck obata_weighted_identity(const ZonalField& u, int n, Real c) {
    for (Index k = 0; k < u.values().size(); ++k)
        if (!(u.values()[k] > 0.0))
            throw DomainError("obata identity requires u > 0");
    const ZonalGrid& g = *u.grid();
    if (g.dim() != n)
        throw DomainError("zonal obata identity: grid dimension != n");
    Vector up = zonal_dtheta(u);
    ZonalField lap_f = zonal_laplacian(u);
    Vector lap = lap_f.values();
    Vector lap2 = zonal_laplacian(lap_f).values();
    Vector dlap = zonal_dtheta(lap_f);
    Vector tl = zonal_traceless_hessian_normsq(u);
    return obata_check_impl(
        g.n_nodes(), n, c,
        [&](Index k) {
            ObataPoint p;
            p.u = u.values()[k];
            p.grad_sq = up[k] * up[k];
            p.lap = lap[k];
            p.lap2 = lap2[k];
            p.grad_dot_dlap = up[k] * dlap[k];
            p.tl_hess_sq = tl[k];
            return p;
        },
        [&](const Vector& v) { return zonal_integrate_values(g, v); });
}

}  // namespace nullcone
