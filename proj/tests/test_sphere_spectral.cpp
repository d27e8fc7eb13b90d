#include <doctest.h>

#include <cmath>
#include <random>

#include "nullcone/sphere_field.hpp"

using namespace nullcone;

namespace {

SphereField random_field(GridPtr grid, int lmax, std::mt19937_64& rng, Real amp = 1.0) {
    std::normal_distribution<Real> gauss(0.0, 1.0);
    Vector c = Vector::Zero(grid->coeff_count());
    for (int l = 0; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m)
            c[SphereGrid::coeff_index(l, m)] = amp * gauss(rng) / (1.0 + l * l);
    return SphereField::from_coeffs(std::move(grid), std::move(c));
}

}  // namespace

TEST_CASE("analysis of canonical fields") {
    auto grid = SphereGrid::standard(16);
    SphereField one = SphereField::constant(grid, 1.0);
    Vector c = analyze(*grid, one.values());
    CHECK(c[0] == doctest::Approx(std::sqrt(4.0 * kPi)).epsilon(1e-14));
    for (int i = 1; i < c.size(); ++i) CHECK(std::abs(c[i]) < 1e-13);

    // X^3 = cos th has the single coefficient sqrt(4 pi / 3) at (1,0)
    Vector x3(grid->n_nodes());
    for (int i = 0; i < grid->n_theta(); ++i)
        for (int j = 0; j < grid->n_phi(); ++j)
            x3[grid->node(i, j)] = grid->cos_theta()[i];
    Vector cx = analyze(*grid, x3);
    CHECK(cx[SphereGrid::coeff_index(1, 0)] ==
          doctest::Approx(std::sqrt(4.0 * kPi / 3.0)).epsilon(1e-14));
    cx[SphereGrid::coeff_index(1, 0)] = 0.0;
    CHECK(cx.cwiseAbs().maxCoeff() < 1e-13);

    // quadrature integrates all harmonics exactly: int Y_lm = 0 for l > 0
    for (int l = 1; l <= 16; ++l)
        for (int m : {-l, 0, l}) {
            SphereField y = SphereField::harmonic(grid, l, m);
            CHECK(std::abs(integrate(y)) < 1e-12);
        }
}

TEST_CASE("band-limited round trip and Parseval") {
    std::mt19937_64 rng(3);
    auto grid = SphereGrid::standard(24);
    SphereField u = random_field(grid, 24, rng);
    Vector values = synthesize(*grid, u.coeffs());
    Vector back = analyze(*grid, values);
    CHECK((back - u.coeffs()).cwiseAbs().maxCoeff() < 1e-11);

    // Parseval: int u^2 = sum a^2
    SphereField usq = multiply(u, u);
    CHECK(integrate(usq) ==
          doctest::Approx(u.coeffs().squaredNorm()).epsilon(1e-10));
}

TEST_CASE("laplacian eigenvalues") {
    auto grid = SphereGrid::standard(12);
    SphereField x3 = SphereField::coordinate(grid, 3);
    SphereField lap = laplacian(x3);
    CHECK((lap.values() + 2.0 * x3.values()).cwiseAbs().maxCoeff() < 1e-12);

    SphereField c = SphereField::constant(grid, 2.5);
    CHECK(laplacian(c).values().cwiseAbs().maxCoeff() < 1e-12);

    for (int m : {-3, 0, 2}) {
        SphereField y = SphereField::harmonic(grid, 3, m);
        SphereField ly = laplacian(y);
        CHECK((ly.values() + 12.0 * y.values()).cwiseAbs().maxCoeff() < 1e-11);
    }
}

TEST_CASE("gradient and hessian of l=1 fields") {
    auto grid = SphereGrid::standard(16);
    SphereField x3 = SphereField::coordinate(grid, 3);

    // |grad X^3|^2 = 1 - (X^3)^2 pointwise
    GradientField g = gradient(x3);
    for (Index k = 0; k < grid->n_nodes(); ++k) {
        const Real expect = 1.0 - x3.values()[k] * x3.values()[k];
        CHECK(g.d_theta[k] * g.d_theta[k] + g.d_phi[k] * g.d_phi[k] ==
              doctest::Approx(expect).epsilon(1e-10));
    }

    // Hess X^3 = -X^3 sigma (concircular); traceless part vanishes
    HessianField h = hessian(x3);
    for (Index k = 0; k < grid->n_nodes(); ++k) {
        CHECK(h.tt[k] == doctest::Approx(-x3.values()[k]).epsilon(1e-10));
        CHECK(h.pp[k] == doctest::Approx(-x3.values()[k]).epsilon(1e-10));
        CHECK(std::abs(h.tp[k]) < 1e-10);
    }
    SphereField tl = traceless_hessian_normsq(x3, 2);
    CHECK(tl.values().cwiseAbs().maxCoeff() < 1e-10);

    SphereField c = SphereField::constant(grid, 3.0);
    CHECK(gradient(c).d_theta.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(hessian(c).tt.cwiseAbs().maxCoeff() < 1e-12);

    // any l <= 1 combination stays concircular
    std::mt19937_64 rng(17);
    SphereField low = random_field(grid, 1, rng);
    CHECK(traceless_hessian_normsq(low, 2).values().cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("hessian trace equals laplacian and Y20 has nonzero traceless part") {
    std::mt19937_64 rng(7);
    auto grid = SphereGrid::standard(20);
    SphereField u = random_field(grid, 20, rng);
    HessianField h = hessian(u);
    Vector lap = laplacian(u).values();
    Real scale = lap.cwiseAbs().maxCoeff();
    for (Index k = 0; k < grid->n_nodes(); ++k)
        CHECK(std::abs(h.tt[k] + h.pp[k] - lap[k]) < 1e-9 * scale);

    SphereField y20 = SphereField::harmonic(grid, 2, 0);
    CHECK(traceless_hessian_normsq(y20, 2).values().maxCoeff() > 0.1);

    // identity |tl Hess|^2 = |Hess|^2 - (Lap)^2/2 on random fields
    SphereField tl = traceless_hessian_normsq(u, 2);
    Real max_err = 0.0;
    for (Index k = 0; k < grid->n_nodes(); ++k) {
        const Real hsq = h.tt[k] * h.tt[k] + 2 * h.tp[k] * h.tp[k] + h.pp[k] * h.pp[k];
        max_err = std::max(max_err,
                           std::abs(tl.values()[k] - (hsq - 0.5 * lap[k] * lap[k])));
    }
    CHECK(max_err < 1e-9 * std::max(1.0, tl.values().maxCoeff()));
}

TEST_CASE("integration and low modes") {
    auto grid = SphereGrid::standard(10);
    CHECK(integrate(SphereField::constant(grid, 1.0)) ==
          doctest::Approx(4.0 * kPi).epsilon(1e-14));

    SphereField x1 = SphereField::coordinate(grid, 1);
    Vector c = SphereField::constant(grid, 2.0).coeffs() + 0.3 * x1.coeffs();
    SphereField low = SphereField::from_coeffs(grid, std::move(c));
    CHECK(low_mode_distance(low) == 0.0);

    // X^3 + 0.1 Y20: distance from Parseval
    Vector c2 = SphereField::coordinate(grid, 3).coeffs();
    c2[SphereGrid::coeff_index(2, 0)] = 0.1;
    SphereField mixed = SphereField::from_coeffs(grid, std::move(c2));
    const Real expected = 0.1 / std::sqrt(4.0 * kPi / 3.0 + 0.01);
    CHECK(low_mode_distance(mixed) == doctest::Approx(expected).epsilon(1e-12));

    SphereField proj = project_low_modes(mixed);
    CHECK(low_mode_distance(proj) == 0.0);
    CHECK(proj.coeff(1, 0) == doctest::Approx(std::sqrt(4.0 * kPi / 3.0)));
}

TEST_CASE("integration by parts on random band-limited pairs") {
    std::mt19937_64 rng(23);
    auto grid = SphereGrid::standard(18);
    for (int trial = 0; trial < 5; ++trial) {
        SphereField u = random_field(grid, 18, rng);
        SphereField v = random_field(grid, 18, rng);
        const Real lhs = integrate(multiply(u, laplacian(v)));
        GradientField gu = gradient(u), gv = gradient(v);
        Vector dot = gu.d_theta.array() * gv.d_theta.array() +
                     gu.d_phi.array() * gv.d_phi.array();
        const Real rhs = -integrate_values(*grid, dot);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("frame components are rotation invariant") {
    // compare |Hess u|^2 of a field and its z-rotated copy; content at l <= 7
    // so the squared field stays inside the grid bandlimit
    std::mt19937_64 rng(31);
    auto grid = SphereGrid::standard(14);
    SphereField u = random_field(grid, 7, rng);

    const Real alpha = 0.83;  // rotation angle about z
    Vector rotated(grid->n_nodes());
    for (int i = 0; i < grid->n_theta(); ++i)
        for (int j = 0; j < grid->n_phi(); ++j)
            rotated[grid->node(i, j)] = u.eval(grid->theta()[i], grid->phi()[j] - alpha);
    SphereField ur = SphereField::from_values(grid, std::move(rotated));

    SphereField tl_u = traceless_hessian_normsq(u, 2);
    SphereField tl_r = traceless_hessian_normsq(ur, 2);
    for (int i = 0; i < grid->n_theta(); ++i)
        for (int j = 0; j < grid->n_phi(); ++j) {
            const Real a = tl_r.values()[grid->node(i, j)];
            const Real b = tl_u.eval(grid->theta()[i], grid->phi()[j] - alpha);
            CHECK(a == doctest::Approx(b).epsilon(1e-7));
        }
}

TEST_CASE("pointwise evaluation matches grid synthesis") {
    std::mt19937_64 rng(41);
    auto grid = SphereGrid::standard(12);
    SphereField u = random_field(grid, 12, rng);
    for (int i = 0; i < grid->n_theta(); i += 3)
        for (int j = 0; j < grid->n_phi(); j += 5)
            CHECK(u.eval(grid->theta()[i], grid->phi()[j]) ==
                  doctest::Approx(u.values()[grid->node(i, j)]).epsilon(1e-12));
}

TEST_CASE("Bochner identity on the round sphere") {
    // Lap(|grad u|^2 / 2) = |Hess u|^2 + grad u . grad Lap u + |grad u|^2
    // for band-limited u (Ric = metric on S^2); evaluated on a grid able to
    // hold the band-2L quadratic fields exactly
    std::mt19937_64 rng(53);
    const int L = 10;
    auto big = std::make_shared<const SphereGrid>(2 * L, 2 * L + 1, 4 * L + 1);
    for (int trial = 0; trial < 5; ++trial) {
        SphereField u = random_field(big, L, rng);
        GradientField du = gradient(u);
        HessianField h = hessian(u);
        SphereField lap = laplacian(u);
        GradientField dlap = gradient(lap);

        Vector gradsq(big->n_nodes()), rhs(big->n_nodes());
        for (Index k = 0; k < big->n_nodes(); ++k) {
            gradsq[k] = du.d_theta[k] * du.d_theta[k] + du.d_phi[k] * du.d_phi[k];
            const Real hsqn = h.tt[k] * h.tt[k] + 2 * h.tp[k] * h.tp[k] +
                              h.pp[k] * h.pp[k];
            rhs[k] = hsqn +
                     du.d_theta[k] * dlap.d_theta[k] + du.d_phi[k] * dlap.d_phi[k] +
                     gradsq[k];
        }
        SphereField lhs =
            laplacian(SphereField::from_values(big, 0.5 * gradsq));
        const Real scale = std::max(rhs.cwiseAbs().maxCoeff(), Real(1e-12));
        CHECK((lhs.values() - rhs).cwiseAbs().maxCoeff() < 1e-8 * scale);
    }
}
