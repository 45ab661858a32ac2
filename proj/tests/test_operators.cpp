#include <doctest.h>

#include "helpers.hpp"
#include "thermel/operators.hpp"

using namespace thermel;
using namespace thermel::testing;

namespace {
const std::vector<Grid> kGrids = {Grid(2, 2, 2),          Grid(3, 4, 5),
                                  Grid(5, 3, 4, 2.0, 1.0, 0.5), Grid(8, 8, 8),
                                  Grid(16, 16, 16)};
}

TEST_CASE("grad is exact on linear fields") {
    for (const Grid& g : kGrids) {
        NodeField lin = sample_nodes(g, [](std::array<double, 3> x) {
            return 1.5 * x[0] - 2.0 * x[1] + 0.25 * x[2] + 3.0;
        });
        EdgeField gr = grad(lin);
        const double coef[3] = {1.5, -2.0, 0.25};
        for (int c = 0; c < 3; ++c)
            for (double v : gr.comp(c)) CHECK(v == doctest::Approx(coef[c]).epsilon(1e-13));
    }
}

TEST_CASE("div_edge is the negative adjoint of grad for zero-trace scalars") {
    for (const Grid& g : kGrids) {
        NodeField phi = random_nodes(g, 11);
        // zero the trace
        for (int k = 0; k <= g.cells[2]; ++k)
            for (int j = 0; j <= g.cells[1]; ++j)
                for (int i = 0; i <= g.cells[0]; ++i)
                    if (i == 0 || i == g.cells[0] || j == 0 || j == g.cells[1] || k == 0 ||
                        k == g.cells[2])
                        phi(i, j, k) = 0.0;
        EdgeField J = random_edges(g, 12);
        double lhs = dot_edges(grad(phi), J);
        double rhs = -dot_nodes(phi, div_edge(J));
        double scale = norm2_edges(J) * norm2_nodes(phi) + 1.0;
        CHECK(std::abs(lhs - rhs) <= 1e-13 * scale);
    }
}

TEST_CASE("curl of a gradient vanishes identically") {
    for (const Grid& g : kGrids) {
        NodeField psi = random_nodes(g, 21);
        FaceField c = curl_edge_to_face(grad(psi));
        double scale = 0.0;
        for (int d = 0; d < 3; ++d)
            for (double v : grad(psi).comp(d)) scale = std::max(scale, std::abs(v));
        CHECK(max_abs_faces(c) <= 1e-13 * (scale / std::min({g.h[0], g.h[1], g.h[2]}) + 1.0));
    }
}

TEST_CASE("divergence of a curl vanishes identically") {
    for (const Grid& g : kGrids) {
        EdgeField A = random_edges(g, 31);
        CellField d = div_face(curl_edge_to_face(A));
        double hmin = std::min({g.h[0], g.h[1], g.h[2]});
        double scale = max_abs_edges(A) / (hmin * hmin) + 1.0;
        double worst = 0.0;
        for (double v : d.data()) worst = std::max(worst, std::abs(v));
        CHECK(worst <= 1e-13 * scale);
    }
}

TEST_CASE("dual identity: interior divergence of the face-to-edge curl vanishes") {
    for (const Grid& g : kGrids) {
        FaceField H = random_faces(g, 41);
        NodeField d = div_edge(curl_face_to_edge(H));
        double hmin = std::min({g.h[0], g.h[1], g.h[2]});
        double scale = max_abs_faces(H) / (hmin * hmin) + 1.0;
        double worst = 0.0;
        for (double v : d.data()) worst = std::max(worst, std::abs(v));
        CHECK(worst <= 1e-13 * scale);
    }
}

TEST_CASE("weighted operator is symmetric on interior scalars") {
    Grid g(5, 4, 3);
    NodeField su = random_nodes(g, 51, 0.5, 2.0);
    EdgeField sig = EdgeField(g);
    for (int c = 0; c < 3; ++c)
        for (double& v : sig.comp(c)) v = 1.0;
    auto zero_trace = [&](NodeField f) {
        for (int k = 0; k <= g.cells[2]; ++k)
            for (int j = 0; j <= g.cells[1]; ++j)
                for (int i = 0; i <= g.cells[0]; ++i)
                    if (i == 0 || i == g.cells[0] || j == 0 || j == g.cells[1] || k == 0 ||
                        k == g.cells[2])
                        f(i, j, k) = 0.0;
        return f;
    };
    NodeField u = zero_trace(random_nodes(g, 52));
    NodeField v = zero_trace(random_nodes(g, 53));
    double a = dot_nodes(apply_weighted_neg_div_grad(sig, u), v);
    double b = dot_nodes(u, apply_weighted_neg_div_grad(sig, v));
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    // with unit weights the operator reduces to the plain 7-point -Laplacian
    CHECK(max_abs_diff_nodes(apply_weighted_neg_div_grad(sig, u), apply_neg_laplacian(u)) <=
          1e-12);
}

TEST_CASE("avg_edge_to_node of a constant field recovers the squared magnitude") {
    Grid g(4, 4, 4);
    EdgeField e(g);
    const double val[3] = {0.3, -0.2, 0.5};
    for (int c = 0; c < 3; ++c)
        for (double& v : e.comp(c)) v = val[c];
    NodeField sq = avg_edge_to_node(e);
    double expect = val[0] * val[0] + val[1] * val[1] + val[2] * val[2];
    for (double v : sq.data()) CHECK(v == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("avg_edge_to_node is nonnegative on random data") {
    Grid g(6, 5, 4);
    NodeField sq = avg_edge_to_node(random_edges(g, 61));
    for (double v : sq.data()) CHECK(v >= 0.0);
}

TEST_CASE("node_to_edge_average is exact on linear fields") {
    Grid g(5, 5, 5, 1.0, 2.0, 0.5);
    NodeField lin = sample_nodes(g, [](std::array<double, 3> x) {
        return 2.0 * x[0] + 0.5 * x[1] - x[2];
    });
    EdgeField avg = node_to_edge_average(lin);
    for (int c = 0; c < 3; ++c) {
        const Box3& b = avg.box(c);
        for (int k = 0; k < b.dims[2]; ++k)
            for (int j = 0; j < b.dims[1]; ++j)
                for (int i = 0; i < b.dims[0]; ++i) {
                    auto x = g.edge_pos(c, i, j, k);
                    double expect = 2.0 * x[0] + 0.5 * x[1] - x[2];
                    CHECK(avg.at(c, i, j, k) == doctest::Approx(expect).epsilon(1e-13));
                }
    }
}

TEST_CASE("staggered norms scale with the cell volume") {
    Grid g(4, 4, 4, 2.0, 2.0, 2.0);
    NodeField ones(g);
    for (double& v : ones.data()) v = 1.0;
    // 5^3 nodes, each weighted by the cell volume (0.5)^3
    CHECK(norm2_nodes(ones) == doctest::Approx(std::sqrt(125.0 * 0.125)).epsilon(1e-14));
}

TEST_CASE("grid rejects degenerate shapes") {
    CHECK_THROWS_AS(Grid(1, 4, 4), std::invalid_argument);
    CHECK_THROWS_AS(Grid(4, 4, 4, -1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("require_finite names the offending index") {
    Grid g(2, 2, 2);
    NodeField f(g);
    f.data()[5] = std::nan("");
    CHECK_THROWS_WITH_AS(f.require_finite("field"), doctest::Contains("flat index 5"),
                         std::invalid_argument);
}
