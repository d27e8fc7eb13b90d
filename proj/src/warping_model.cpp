#include "nullcone/warping_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nullcone/quadrature.hpp"

namespace nullcone {

std::string to_string(SpacetimeKind kind) {
    switch (kind) {
        case SpacetimeKind::Minkowski: return "minkowski";
        case SpacetimeKind::Schwarzschild: return "schwarzschild";
        case SpacetimeKind::DeSitter: return "desitter";
        case SpacetimeKind::AntiDeSitter: return "antidesitter";
        case SpacetimeKind::Custom: return "custom";
    }
    return "unknown";
}

namespace {
constexpr Real kHorizonClip = 1e-6;

void validate_derivatives(const WarpingModel& m) {
    // Centered finite differences of f^2 vs the supplied derivative callables.
    const Real lo = m.r_lo(), hi = std::isfinite(m.r_hi()) ? m.r_hi() : lo + 10.0 + 10.0 * std::abs(lo);
    for (int i = 1; i <= 7; ++i) {
        Real r = lo + (hi - lo) * i / 8.0;
        Real h = 1e-5 * std::max(Real(1), std::abs(r));
        if (r - 2 * h <= lo || r + 2 * h >= hi) continue;
        Real d_fd = (m.fsq(r + h) - m.fsq(r - h)) / (2 * h);
        Real d2_fd = (m.fsq(r + h) - 2 * m.fsq(r) + m.fsq(r - h)) / (h * h);
        Real scale_d = std::max({std::abs(d_fd), std::abs(m.dfsq(r)), Real(1e-8)});
        Real scale_d2 = std::max({std::abs(d2_fd), std::abs(m.d2fsq(r)), Real(1e-4)});
        if (std::abs(d_fd - m.dfsq(r)) > 1e-6 * scale_d ||
            std::abs(d2_fd - m.d2fsq(r)) > 1e-4 * scale_d2)
            throw DomainError("custom model derivatives inconsistent with f^2 at r=" +
                              std::to_string(r));
        if (m.fsq(r) <= 0.0)
            throw DomainError("custom model has f^2 <= 0 inside the domain");
    }
}
}  // namespace

WarpingModel WarpingModel::minkowski(int n) {
    WarpingModel m;
    m.kind_ = SpacetimeKind::Minkowski;
    m.n_ = n;
    m.r_lo_ = 0.0;
    m.r_hi_ = std::numeric_limits<Real>::infinity();
    m.fsq_ = [](Real) { return 1.0; };
    m.dfsq_ = [](Real) { return 0.0; };
    m.d2fsq_ = [](Real) { return 0.0; };
    return m;
}

WarpingModel WarpingModel::schwarzschild(Real mass, int n) {
    if (mass <= 0.0) throw DomainError("schwarzschild mass must be positive");
    WarpingModel m;
    m.kind_ = SpacetimeKind::Schwarzschild;
    m.n_ = n;
    m.mass_ = mass;
    m.r_lo_ = 2.0 * mass * (1.0 + kHorizonClip);
    m.r_hi_ = std::numeric_limits<Real>::infinity();
    m.fsq_ = [mass](Real r) { return 1.0 - 2.0 * mass / r; };
    m.dfsq_ = [mass](Real r) { return 2.0 * mass / (r * r); };
    m.d2fsq_ = [mass](Real r) { return -4.0 * mass / (r * r * r); };
    return m;
}

WarpingModel WarpingModel::de_sitter(Real radius_l, int n) {
    if (radius_l <= 0.0) throw DomainError("de sitter radius must be positive");
    WarpingModel m;
    m.kind_ = SpacetimeKind::DeSitter;
    m.n_ = n;
    m.radius_l_ = radius_l;
    m.r_lo_ = 0.0;
    m.r_hi_ = radius_l;
    Real l2 = radius_l * radius_l;
    m.fsq_ = [l2](Real r) { return 1.0 - r * r / l2; };
    m.dfsq_ = [l2](Real r) { return -2.0 * r / l2; };
    m.d2fsq_ = [l2](Real) { return -2.0 / l2; };
    return m;
}

WarpingModel WarpingModel::anti_de_sitter(Real radius_l, int n) {
    if (radius_l <= 0.0) throw DomainError("anti-de sitter radius must be positive");
    WarpingModel m;
    m.kind_ = SpacetimeKind::AntiDeSitter;
    m.n_ = n;
    m.radius_l_ = radius_l;
    m.r_lo_ = 0.0;
    m.r_hi_ = std::numeric_limits<Real>::infinity();
    Real l2 = radius_l * radius_l;
    m.fsq_ = [l2](Real r) { return 1.0 + r * r / l2; };
    m.dfsq_ = [l2](Real r) { return 2.0 * r / l2; };
    m.d2fsq_ = [l2](Real) { return 2.0 / l2; };
    return m;
}

WarpingModel WarpingModel::custom(ScalarFn fsq, ScalarFn dfsq, ScalarFn d2fsq, Real r_lo,
                                  Real r_hi, int n) {
    if (!(r_lo < r_hi)) throw DomainError("custom model needs r_lo < r_hi");
    if (n < 3) throw DomainError("dimension n must be >= 3");
    WarpingModel m;
    m.kind_ = SpacetimeKind::Custom;
    m.n_ = n;
    m.r_lo_ = r_lo;
    m.r_hi_ = r_hi;
    m.fsq_ = std::move(fsq);
    m.dfsq_ = std::move(dfsq);
    m.d2fsq_ = std::move(d2fsq);
    validate_derivatives(m);
    return m;
}

bool WarpingModel::is_space_form() const {
    return kind_ == SpacetimeKind::Minkowski || kind_ == SpacetimeKind::DeSitter ||
           kind_ == SpacetimeKind::AntiDeSitter;
}

void WarpingModel::require(Real r) const {
    if (!contains(r)) {
        std::ostringstream os;
        os << "radius " << r << " outside model domain [" << r_lo_ << ", " << r_hi_ << ")";
        throw DomainError(os.str());
    }
}

void WarpingModel::require_interior(Real r) const {
    if (!interior(r)) {
        std::ostringstream os;
        os << "radius " << r << " not in the interior of (" << r_lo_ << ", " << r_hi_
           << ")";
        throw DomainError(os.str());
    }
}

Real WarpingModel::f(Real r) const {
    Real s = fsq_(r);
    if (s <= 0.0) throw DomainError("f^2 <= 0 at r=" + std::to_string(r));
    return std::sqrt(s);
}

Real WarpingModel::tortoise_closed_form(Real r) const {
    switch (kind_) {
        case SpacetimeKind::Minkowski: return r;
        case SpacetimeKind::AntiDeSitter: return radius_l_ * std::atan(r / radius_l_);
        case SpacetimeKind::DeSitter: return radius_l_ * std::atanh(r / radius_l_);
        case SpacetimeKind::Schwarzschild:
            return r + 2.0 * mass_ * std::log(r / (2.0 * mass_) - 1.0);
        case SpacetimeKind::Custom: break;
    }
    throw DomainError("closed-form tortoise not available for custom models");
}

Real ncc_deficit(const WarpingModel& model, Real r) {
    model.require_interior(r);
    return (model.fsq(r) - 1.0) / (r * r) - model.ffp(r) / r;
}

Real ncc_flux(const WarpingModel& model, Real r) {
    model.require_interior(r);
    const int n = model.dimension();
    return std::pow(r, n - 1) * model.ffp(r) + std::pow(r, n - 2) * (1.0 - model.fsq(r));
}

NullRicciResult null_ricci_combination(const WarpingModel& model, Real r) {
    model.require_interior(r);
    const int n = model.dimension();
    NullRicciResult out;
    out.value = (n - 3) * model.ffp(r) / r + 0.5 * model.d2fsq(r) +
                (n - 2) * (1.0 - model.fsq(r)) / (r * r);
    const Real h = 1e-5 * std::max(Real(1), r);
    out.flux_derivative = (ncc_flux(model, r + h) - ncc_flux(model, r - h)) / (2 * h);
    const Real predicted = std::pow(r, n - 1) * out.value;
    // triangle-inequality magnitude of d/dr flux, so exactly-cancelling
    // models (space forms) do not divide roundoff by roundoff
    const Real deriv_scale = (n - 1) * std::pow(r, n - 2) * std::abs(model.ffp(r)) +
                             0.5 * std::pow(r, n - 1) * std::abs(model.d2fsq(r)) +
                             (n - 2) * std::pow(r, n - 3) * std::abs(1.0 - model.fsq(r)) +
                             std::pow(r, n - 2) * std::abs(model.dfsq(r));
    const Real scale =
        std::max({std::abs(out.flux_derivative), std::abs(predicted), deriv_scale});
    out.identity_rel_error = std::abs(out.flux_derivative - predicted) / scale;
    return out;
}

Real canonical_tortoise(const WarpingModel& model, Real r) {
    if (model.has_closed_form_tortoise()) return model.tortoise_closed_form(r);
    const Real hi = std::isfinite(model.r_hi()) ? model.r_hi() : model.r_lo() + 10.0;
    return tortoise(model, r, 0.5 * (model.r_lo() + hi));
}

Real tortoise(const WarpingModel& model, Real r, Real r_ref) {
    const Real lo = std::min(r, r_ref), hi = std::max(r, r_ref);
    if (!(model.contains(lo) && (model.contains(hi) || hi == model.r_hi())))
        throw DomainError("tortoise integration interval leaves the model domain");
    return integrate_adaptive([&model](Real s) { return 1.0 / model.fsq(s); }, r_ref, r,
                              1e-12);
}

Real radius_from_tortoise(const WarpingModel& model, Real rstar, Real r_ref) {
    model.require(r_ref);
    // Bracket the monotone map first, then bisect/Newton.
    Real lo = model.r_lo(), hi = model.r_hi();
    auto g = [&](Real r) { return tortoise(model, r, r_ref) - rstar; };
    // Expand a finite search bracket inside the domain.
    Real a = r_ref, b = r_ref;
    Real step = std::max(Real(0.5), 0.1 * std::abs(r_ref));
    if (rstar >= 0.0) {
        for (int i = 0; i < 200 && g(b) < 0.0; ++i) {
            a = b;
            b = std::isfinite(hi) ? b + std::min(step, 0.5 * (hi - b)) : b + step;
            step *= 2.0;
            if (std::isfinite(hi) && hi - b < 1e-13 * std::max(Real(1), hi) && g(b) < 0.0)
                throw DomainError("tortoise target beyond the model domain");
        }
    } else {
        for (int i = 0; i < 200 && g(a) > 0.0; ++i) {
            b = a;
            Real room = a - lo;
            if (room <= 1e-13 * std::max(Real(1), std::abs(lo) + 1))
                throw DomainError("tortoise target beyond the model domain");
            a -= std::min(step, 0.5 * room);
            step *= 2.0;
        }
    }
    // Newton with bisection fallback; dr*/dr = 1/f^2.
    Real x = 0.5 * (a + b);
    for (int iter = 0; iter < 200; ++iter) {
        Real gx = g(x);
        if (gx > 0.0) b = x;
        else a = x;
        Real dx = -gx * model.fsq(x);
        Real xn = x + dx;
        if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
        if (std::abs(xn - x) < 1e-14 * std::max(Real(1), std::abs(x))) return xn;
        x = xn;
    }
    return x;
}

EfPoint ef_from_static(const WarpingModel& model, Real t, Real r, Real r_ref) {
    model.require(r);
    Real rstar = tortoise(model, r, r_ref);
    return {t + rstar, t - rstar};
}

StaticPoint static_from_ef(const WarpingModel& model, Real v, Real w, Real r_ref) {
    Real r = radius_from_tortoise(model, 0.5 * (v - w), r_ref);
    return {0.5 * (v + w), r};
}

EfMetricBlocks ef_metric(const WarpingModel& model, Real v, Real w, Real r_ref) {
    StaticPoint p = static_from_ef(model, v, w, r_ref);
    return {p.r, -0.5 * model.fsq(p.r), p.r * p.r};
}

Matrix ef_metric_matrix(const WarpingModel& model, Real v, Real w, Real theta,
                        Real r_ref) {
    EfMetricBlocks b = ef_metric(model, v, w, r_ref);
    Matrix g = Matrix::Zero(4, 4);
    g(0, 1) = g(1, 0) = b.g_vw;
    g(2, 2) = b.r_sq;
    Real s = std::sin(theta);
    g(3, 3) = b.r_sq * s * s;
    return g;
}

}  // namespace nullcone
