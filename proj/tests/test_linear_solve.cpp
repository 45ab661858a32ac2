#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "thermel/conductivity.hpp"
#include "thermel/linear_solve.hpp"

using namespace thermel;
using namespace thermel::testing;

namespace {

constexpr double kPi = 3.14159265358979323846;

EdgeField unit_sigma(const Grid& g) {
    EdgeField e(g);
    for (int c = 0; c < 3; ++c)
        for (double& v : e.comp(c)) v = 1.0;
    return e;
}

}  // namespace

TEST_CASE("Dirichlet solve recovers the negative of a potential applied field exactly") {
    // E0 = grad(psi) with psi of zero trace: phi = -psi solves the discrete
    // system exactly, for any positive conductivity
    Grid g(6, 5, 4);
    NodeField u = random_nodes(g, 1, -0.5, 0.5);
    EdgeField sig = sigma_to_edges(eval_sigma(ConductivityModel::bounded_sigmoid(1, 2, 0, 1), u));
    NodeField psi = sample_nodes(g, [](std::array<double, 3> x) {
        return std::sin(kPi * x[0]) * x[1] * (1.0 - x[1]) * x[2] * (1.0 - x[2]);
    });
    SolverControls ctl;
    ctl.tol = 1e-12;
    auto [phi, rep] = solve_weighted_dirichlet(sig, grad(psi), ctl);
    CHECK(rep.converged);
    NodeField neg = psi;
    for (double& v : neg.data()) v = -v;
    CHECK(max_abs_diff_nodes(phi, neg) <= 1e-9);
}

TEST_CASE("Dirichlet Poisson solve converges at second order on a smooth source") {
    // -Laplace(phi) = 3 pi^2 phi* with phi* = sin sin sin
    auto solve_on = [&](int n) {
        Grid g(n, n, n);
        NodeField rhs = sample_nodes(g, [](std::array<double, 3> x) {
            return 3.0 * kPi * kPi * std::sin(kPi * x[0]) * std::sin(kPi * x[1]) *
                   std::sin(kPi * x[2]);
        });
        SolverControls ctl;
        ctl.tol = 1e-12;
        NodeField bc(g);
        auto [phi, rep] = solve_poisson_dirichlet(rhs, nullptr, bc, ctl);
        REQUIRE(rep.converged);
        NodeField exact = sample_nodes(g, [](std::array<double, 3> x) {
            return std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * std::sin(kPi * x[2]);
        });
        NodeField diff = phi;
        for (std::size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= exact.data()[i];
        return norm2_nodes(diff);
    };
    double e8 = solve_on(8), e16 = solve_on(16), e32 = solve_on(32);
    CHECK(std::log2(e8 / e16) >= 1.9);
    CHECK(std::log2(e16 / e32) >= 1.9);
}

TEST_CASE("Neumann solve reproduces a linear potential exactly") {
    Grid g(5, 4, 6, 1.0, 2.0, 0.5);
    EdgeField sig = unit_sigma(g);
    // flux of phi* = x1: +-1 on the two x-faces
    BoundaryFlux flux(g);
    for (int side = 0; side < 2; ++side) {
        int i = side == 0 ? 0 : g.cells[0];
        for (int ja = 0; ja < g.cells[1]; ++ja)
            for (int ka = 0; ka < g.cells[2]; ++ka)
                flux.g.at(0, i, ja, ka) = side == 0 ? -1.0 : 1.0;
    }
    SolverControls ctl;
    ctl.tol = 1e-12;
    auto [phi, rep] = solve_weighted_neumann(sig, flux, ctl);
    CHECK(rep.converged);
    // zero-mean representative of x1 on [0,1]
    NodeField exact = sample_nodes(g, [](std::array<double, 3> x) { return x[0] - 0.5; });
    CHECK(max_abs_diff_nodes(phi, exact) <= 1e-9);
    // returned representative has zero mean
    double mean = 0.0;
    for (double v : phi.data()) mean += v;
    CHECK(std::abs(mean / double(phi.data().size())) <= 1e-12);
}

TEST_CASE("Neumann solve rejects incompatible flux, citing the boundary integral") {
    Grid g(4, 4, 4);
    BoundaryFlux flux(g);
    for (int c = 0; c < 3; ++c)
        for (int side = 0; side < 2; ++side) {
            std::array<int, 3> p{0, 0, 0};
            p[c] = side == 0 ? 0 : g.cells[c];
            const int a = (c + 1) % 3, d = (c + 2) % 3;
            for (int ia = 0; ia < g.cells[a]; ++ia)
                for (int id = 0; id < g.cells[d]; ++id) {
                    p[a] = ia;
                    p[d] = id;
                    flux.g.at(c, p[0], p[1], p[2]) = 1.0;  // net outflow, incompatible
                }
        }
    CHECK(flux.total_flux() == doctest::Approx(6.0));
    SolverControls ctl;
    CHECK_THROWS_WITH_AS(solve_weighted_neumann(unit_sigma(g), flux, ctl),
                         doctest::Contains("boundary integral"), std::invalid_argument);
}

TEST_CASE("boundary flux quadrature: total and norm on a uniform field") {
    Grid g(4, 2, 2, 1.0, 1.0, 1.0);
    BoundaryFlux flux(g);
    for (int c = 0; c < 3; ++c) {
        const Box3& b = flux.g.box(c);
        for (int k = 0; k < b.dims[2]; ++k)
            for (int j = 0; j < b.dims[1]; ++j)
                for (int i = 0; i < b.dims[0]; ++i) flux.g.at(c, i, j, k) = 2.0;
    }
    // |boundary| = 6 on the unit cube; interior faces are ignored
    CHECK(flux.total_flux() == doctest::Approx(12.0));
    CHECK(flux.norm() == doctest::Approx(std::sqrt(4.0 * 6.0)));
}

TEST_CASE("solver reports non-convergence when starved of iterations") {
    Grid g(8, 8, 8);
    // a random right-hand side excites all frequencies, so two CG iterations
    // cannot reach 1e-14 (a pure Laplacian eigenmode would converge in one)
    NodeField rhs = random_nodes(g, 12345);
    SolverControls ctl;
    ctl.tol = 1e-14;
    ctl.maxiter = 2;
    NodeField bc(g);
    auto [phi, rep] = solve_poisson_dirichlet(rhs, nullptr, bc, ctl);
    CHECK_FALSE(rep.converged);
    CHECK(rep.iterations == 2);
    CHECK(rep.rel_residual > 1e-14);
}

TEST_CASE("harmonic extension satisfies the discrete mean-value bounds") {
    Grid g(6, 6, 6);
    NodeField bc = sample_nodes(g, [](std::array<double, 3> x) { return x[0] * x[0]; });
    SolverControls ctl;
    auto [u, rep] = harmonic_extension(bc, ctl);
    CHECK(rep.converged);
    // discrete maximum principle: interior values inside the boundary range
    double lo = 1e300, hi = -1e300;
    for (int k = 0; k <= 6; ++k)
        for (int j = 0; j <= 6; ++j)
            for (int i = 0; i <= 6; ++i)
                if (i == 0 || i == 6 || j == 0 || j == 6 || k == 0 || k == 6) {
                    lo = std::min(lo, bc(i, j, k));
                    hi = std::max(hi, bc(i, j, k));
                }
    for (double v : u.data()) {
        CHECK(v >= lo - 1e-9);
        CHECK(v <= hi + 1e-9);
    }
}

TEST_CASE("rejects invalid controls and non-positive conductivities") {
    Grid g(3, 3, 3);
    EdgeField sig = unit_sigma(g);
    EdgeField E0(g);
    SolverControls bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(solve_weighted_dirichlet(sig, E0, bad), std::invalid_argument);
    sig.comp(1)[0] = -1.0;
    SolverControls ok;
    CHECK_THROWS_AS(solve_weighted_dirichlet(sig, E0, ok), std::invalid_argument);
}
