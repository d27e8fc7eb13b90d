#pragma once

#include <functional>
#include <string>

#include "nullcone/types.hpp"

namespace nullcone {

enum class SpacetimeKind { Minkowski, Schwarzschild, DeSitter, AntiDeSitter, Custom };

std::string to_string(SpacetimeKind kind);

/// Static spherically symmetric model g = -f^2 dt^2 + f^-2 dr^2 + r^2 (round),
/// described by f^2 and its first two radial derivatives on an open interval.
///
/// Built-in kinds:
///   Minkowski       f^2 = 1                 domain [0, inf)
///   Schwarzschild   f^2 = 1 - 2m/r          domain (2m(1+1e-6), inf)
///   DeSitter        f^2 = 1 - (r/l)^2       domain [0, l)
///   AntiDeSitter    f^2 = 1 + (r/l)^2       domain [0, inf)
/// The Schwarzschild domain is clipped just above the horizon so that 1/f^2
/// stays integrable in every operation.
class WarpingModel {
public:
    using ScalarFn = std::function<Real(Real)>;

    static WarpingModel minkowski(int n = 3);
    static WarpingModel schwarzschild(Real mass, int n = 3);
    static WarpingModel de_sitter(Real radius_l, int n = 3);
    static WarpingModel anti_de_sitter(Real radius_l, int n = 3);
    /// Custom model from callables (f^2, (f^2)', (f^2)''). The derivative
    /// callables are validated against centered finite differences of f^2 at
    /// interior sample points (relative tolerance 1e-6); inconsistent triples
    /// are rejected.
    static WarpingModel custom(ScalarFn fsq, ScalarFn dfsq, ScalarFn d2fsq, Real r_lo,
                               Real r_hi, int n = 3);

    SpacetimeKind kind() const { return kind_; }
    int dimension() const { return n_; }  // spacetime is (n+1)-dimensional
    Real mass() const { return mass_; }
    Real radius_l() const { return radius_l_; }
    Real r_lo() const { return r_lo_; }
    Real r_hi() const { return r_hi_; }
    bool is_space_form() const;

    bool contains(Real r) const { return r >= r_lo_ && r < r_hi_; }
    /// Strict interior, for operations that divide by r or approach an edge.
    bool interior(Real r) const { return r > r_lo_ && r < r_hi_ && r > 0.0; }
    void require(Real r) const;           // throws DomainError outside [r_lo, r_hi)
    void require_interior(Real r) const;  // throws DomainError outside the interior

    Real fsq(Real r) const { return fsq_(r); }
    Real dfsq(Real r) const { return dfsq_(r); }
    Real d2fsq(Real r) const { return d2fsq_(r); }
    Real f(Real r) const;
    /// ff' = (f^2)'/2, the combination the curvature formulas use.
    Real ffp(Real r) const { return 0.5 * dfsq_(r); }

    /// Closed-form tortoise coordinate r^* with the canonical gauge
    /// (r^*(0) = 0 for the space forms, r + 2m log(r/2m - 1) for
    /// Schwarzschild). Only available for built-in kinds; this gauge anchors
    /// the advanced/retarded times used by the Killing pairings.
    Real tortoise_closed_form(Real r) const;
    bool has_closed_form_tortoise() const { return kind_ != SpacetimeKind::Custom; }

private:
    WarpingModel() = default;

    SpacetimeKind kind_ = SpacetimeKind::Custom;
    int n_ = 3;
    Real mass_ = 0.0;
    Real radius_l_ = 0.0;
    Real r_lo_ = 0.0;
    Real r_hi_ = 0.0;
    ScalarFn fsq_, dfsq_, d2fsq_;
};

/// (f^2-1)/r^2 - ff'/r. Nonpositive iff the null convergence condition holds
/// at r; identically zero on the space-form locus.
Real ncc_deficit(const WarpingModel& model, Real r);

/// r^{n-1} ff' + r^{n-2}(1-f^2); nonnegative iff ncc_deficit <= 0.
Real ncc_flux(const WarpingModel& model, Real r);

struct NullRicciResult {
    Real value;              // (n-3) ff'/r + (f^2)''/2 + (n-2)(1-f^2)/r^2
    Real flux_derivative;    // centered finite difference of ncc_flux at r
    Real identity_rel_error; // |d/dr flux - r^{n-1} value| relative mismatch
};

/// Ambient Ricci curvature contracted on the null vector (1/f) d_t + e_1,
/// together with the flux-derivative identity check.
NullRicciResult null_ricci_combination(const WarpingModel& model, Real r);

/// Tortoise coordinate difference int_{r_ref}^{r} ds/f^2(s) by adaptive
/// quadrature (absolute tolerance 1e-12).
Real tortoise(const WarpingModel& model, Real r, Real r_ref);

/// Inverse of the tortoise map: solves tortoise(r) - tortoise(r_ref) = rstar
/// by bracketed Newton (r^* is strictly increasing since f^2 > 0).
Real radius_from_tortoise(const WarpingModel& model, Real rstar, Real r_ref);

struct EfPoint {
    Real v;
    Real w;
};
struct StaticPoint {
    Real t;
    Real r;
};

EfPoint ef_from_static(const WarpingModel& model, Real t, Real r, Real r_ref);
StaticPoint static_from_ef(const WarpingModel& model, Real v, Real w, Real r_ref);

/// Tortoise coordinate in the model's canonical gauge: the closed form for
/// built-in kinds, quadrature from the anchor 0.5 (r_lo + min(r_hi, r_lo+10))
/// for custom models. This gauge defines the advanced time of surfaces and
/// the EF chart of the curvature oracle consistently.
Real canonical_tortoise(const WarpingModel& model, Real r);

/// Eddington-Finkelstein metric data at (v, w): the only nonzero blocks are
/// g_vw = g_wv = -f^2/2 and the angular block r^2 (round metric).
struct EfMetricBlocks {
    Real r;        // implied radius, recovered by static_from_ef
    Real g_vw;     // -f^2/2
    Real r_sq;     // conformal factor of the angular block
};
EfMetricBlocks ef_metric(const WarpingModel& model, Real v, Real w, Real r_ref);

/// Full 4x4 EF metric at angular position theta (n = 3 chart ordering
/// v, w, theta, phi) for determinant/oracle checks.
Matrix ef_metric_matrix(const WarpingModel& model, Real v, Real w, Real theta,
                        Real r_ref);

}  // namespace nullcone
