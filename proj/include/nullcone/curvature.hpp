#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nullcone/types.hpp"
#include "nullcone/warping_model.hpp"

namespace nullcone {

class NullConeSurface;

/// Rank-3 symbol table Gamma^l_{mn} (l, m, n in 0..dim-1).
class Tensor3 {
public:
    explicit Tensor3(int dim) : n_(dim), data_(Vector::Zero(Index(dim) * dim * dim)) {}
    Real& operator()(int l, int m, int n) { return data_[(Index(l) * n_ + m) * n_ + n]; }
    Real operator()(int l, int m, int n) const {
        return data_[(Index(l) * n_ + m) * n_ + n];
    }
    int dim() const { return n_; }
    const Vector& raw() const { return data_; }

private:
    int n_;
    Vector data_;
};

/// Rank-4 curvature table in the convention
///   R^d_{abg} = d_a Gamma^d_{bg} - d_b Gamma^d_{ag}
///             + Gamma^d_{ae} Gamma^e_{bg} - Gamma^d_{be} Gamma^e_{ag},
///   R_{abeg}  = g_{ed} R^d_{abg},
/// stored fully lowered: component(a, b, e, g).
class Tensor4 {
public:
    explicit Tensor4(int dim)
        : n_(dim), data_(Vector::Zero(Index(dim) * dim * dim * dim)) {}
    Real& operator()(int a, int b, int e, int g) {
        return data_[((Index(a) * n_ + b) * n_ + e) * n_ + g];
    }
    Real operator()(int a, int b, int e, int g) const {
        return data_[((Index(a) * n_ + b) * n_ + e) * n_ + g];
    }
    int dim() const { return n_; }
    Real max_abs() const { return data_.cwiseAbs().maxCoeff(); }
    const Vector& raw() const { return data_; }
    Vector& raw() { return data_; }

private:
    int n_;
    Vector data_;
};

/// A coordinate chart with a callable metric, for the finite-difference
/// curvature engine. Charts for n = 3 (4-dimensional) spacetimes:
///   static: (t, r, theta, phi), EF: (v, w, theta, phi).
struct MetricChart {
    int dim = 4;
    std::string name;
    std::function<Matrix(const Vector&)> metric;
    /// Per-coordinate step scale at a point (radius-sized for t/r/v/w, O(1)
    /// for angles).
    std::function<Vector(const Vector&)> step_scales;
};

MetricChart static_chart(const WarpingModel& model);
/// EF chart; the implied r(v, w) is recovered by tortoise inversion from the
/// canonical gauge (built-in models).
MetricChart ef_chart(const WarpingModel& model);

/// Closed-form Christoffel symbols of the static chart at (r, theta),
/// oracle-validated expressions (coordinate order t, r, theta, phi).
Tensor3 christoffels_static(const WarpingModel& model, Real r, Real theta);

/// Closed-form Christoffel symbols of the EF chart at (r, theta)
/// (coordinate order v, w, theta, phi). Only the radius matters since the
/// metric depends on (v, w) through r alone.
Tensor3 christoffels_ef(const WarpingModel& model, Real r, Real theta);

/// Christoffels by centered finite differences of the chart metric.
Tensor3 christoffels_fd(const MetricChart& chart, const Vector& point, Real h);

struct RiemannFd {
    Tensor4 lowered;       // Richardson-extrapolated R_{abeg}
    Real error_estimate;   // max component disagreement between the two steps
};

/// Full lowered Riemann tensor by finite differences with Richardson
/// extrapolation over steps {h, h/2}. The nested centered differences are
/// roundoff-limited like eps/h^2, so the default step sits near the
/// eps^(1/6) optimum of the nested scheme rather than the eps^(1/3)
/// single-difference choice.
RiemannFd riemann_fd(const MetricChart& chart, const Vector& point, Real h = 4e-3);

/// Oracle-validated closed-form Riemann components of the static chart at
/// (r, theta). The sphere-sphere block carries the corrected r^2 f^2 factor.
Tensor4 riemann_static_closedform(const WarpingModel& model, Real r, Real theta);

/// Ricci tensor Ric_{bg} = R^a_{abg} from a lowered Riemann table.
Matrix ricci_from_riemann(const Tensor4& riem, const Matrix& metric_at_point);

struct ErratumEntry {
    std::string component;
    Real printed;
    Real oracle;
    std::string chart;
    Real r;
    Real theta;
};

/// Compare the commonly tabulated static-chart Christoffel and curvature
/// entries (and their EF-chart translations) against the finite-difference
/// oracle at a point; tabulated entries failing validation at 1e-4 relative
/// produce erratum entries. The oracle-validated expressions are what the
/// closed-form functions above return.
std::vector<ErratumEntry> printed_formula_errata(const WarpingModel& model, Real r,
                                                 Real theta);

struct ContractionCheck {
    Vector closed_first;    // -2(n-1) ff'/r at each sampled node
    Vector closed_second;   // (4/r) d_a r (-(ff')' + ff'/r), theta-component
    Vector fd_first;
    Vector fd_second;
    Real max_rel_error;
};

/// sigma^{ab} R(Lbar, d_a, d_b, L) and R(Lbar, d_a, L, Lbar) for a surface,
/// via (i) the finite-difference Riemann tensor in the EF chart contracted
/// with the null frame at a sampled subset of grid nodes, and (ii) the
/// closed forms. Sampling keeps the oracle affordable; the closed forms are
/// evaluated at the same nodes.
ContractionCheck ef_riemann_contractions(const NullConeSurface& surface,
                                         int max_samples = 48, unsigned seed = 7);

}  // namespace nullcone
