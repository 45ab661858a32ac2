#include "thermel/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace thermel {

BoundaryMask::BoundaryMask(const Grid& g) : grid_(g) {
    interior_nodes_ = std::size_t(g.cells[0] - 1) * (g.cells[1] - 1) * (g.cells[2] - 1);
}

EdgeField grad(const NodeField& phi) {
    const Grid& g = phi.grid();
    EdgeField out(g);
    for (int c = 0; c < 3; ++c) {
        const Box3& b = out.box(c);
        std::array<int, 3> step{c == 0, c == 1, c == 2};
        const double inv_h = 1.0 / g.h[c];
        for (int k = 0; k < b.dims[2]; ++k)
            for (int j = 0; j < b.dims[1]; ++j)
                for (int i = 0; i < b.dims[0]; ++i)
                    out.at(c, i, j, k) =
                        (phi(i + step[0], j + step[1], k + step[2]) - phi(i, j, k)) * inv_h;
    }
    return out;
}

NodeField div_edge(const EdgeField& J) {
    const Grid& g = J.grid();
    NodeField out(g);
    for (int k = 1; k < g.cells[2]; ++k)
        for (int j = 1; j < g.cells[1]; ++j)
            for (int i = 1; i < g.cells[0]; ++i) {
                double d = (J.at(0, i, j, k) - J.at(0, i - 1, j, k)) / g.h[0] +
                           (J.at(1, i, j, k) - J.at(1, i, j - 1, k)) / g.h[1] +
                           (J.at(2, i, j, k) - J.at(2, i, j, k - 1)) / g.h[2];
                out(i, j, k) = d;
            }
    return out;
}

EdgeField curl_face_to_edge(const FaceField& H) {
    const Grid& g = H.grid();
    EdgeField out(g);
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3;  // (curl H)_c = d_a H_b - d_b H_a
        const int b = (c + 2) % 3;
        const Box3& eb = out.box(c);
        for (int k = 0; k < eb.dims[2]; ++k)
            for (int j = 0; j < eb.dims[1]; ++j)
                for (int i = 0; i < eb.dims[0]; ++i) {
                    std::array<int, 3> p{i, j, k};
                    if (p[a] == 0 || p[a] == g.cells[a] || p[b] == 0 || p[b] == g.cells[b])
                        continue;  // boundary-plane edge
                    // d_a H_b: difference of b-faces shifted along a
                    std::array<int, 3> q = p;
                    q[a] -= 1;
                    double dab = (H.at(b, p[0], p[1], p[2]) - H.at(b, q[0], q[1], q[2])) / g.h[a];
                    q = p;
                    q[b] -= 1;
                    double dba = (H.at(a, p[0], p[1], p[2]) - H.at(a, q[0], q[1], q[2])) / g.h[b];
                    out.at(c, i, j, k) = dab - dba;
                }
    }
    return out;
}

FaceField curl_edge_to_face(const EdgeField& A) {
    const Grid& g = A.grid();
    FaceField out(g);
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3;
        const int b = (c + 2) % 3;
        const Box3& fb = out.box(c);
        for (int k = 0; k < fb.dims[2]; ++k)
            for (int j = 0; j < fb.dims[1]; ++j)
                for (int i = 0; i < fb.dims[0]; ++i) {
                    std::array<int, 3> p{i, j, k};
                    std::array<int, 3> q = p;
                    q[a] += 1;
                    double dab = (A.at(b, q[0], q[1], q[2]) - A.at(b, p[0], p[1], p[2])) / g.h[a];
                    q = p;
                    q[b] += 1;
                    double dba = (A.at(a, q[0], q[1], q[2]) - A.at(a, p[0], p[1], p[2])) / g.h[b];
                    out.at(c, i, j, k) = dab - dba;
                }
    }
    return out;
}

CellField div_face(const FaceField& H) {
    const Grid& g = H.grid();
    CellField out(g);
    for (int k = 0; k < g.cells[2]; ++k)
        for (int j = 0; j < g.cells[1]; ++j)
            for (int i = 0; i < g.cells[0]; ++i)
                out(i, j, k) = (H.at(0, i + 1, j, k) - H.at(0, i, j, k)) / g.h[0] +
                               (H.at(1, i, j + 1, k) - H.at(1, i, j, k)) / g.h[1] +
                               (H.at(2, i, j, k + 1) - H.at(2, i, j, k)) / g.h[2];
    return out;
}

NodeField apply_neg_laplacian(const NodeField& u) {
    const Grid& g = u.grid();
    NodeField out(g);
    const double ix2 = 1.0 / (g.h[0] * g.h[0]);
    const double iy2 = 1.0 / (g.h[1] * g.h[1]);
    const double iz2 = 1.0 / (g.h[2] * g.h[2]);
    for (int k = 0; k <= g.cells[2]; ++k)
        for (int j = 0; j <= g.cells[1]; ++j)
            for (int i = 0; i <= g.cells[0]; ++i) {
                bool bdry = i == 0 || i == g.cells[0] || j == 0 || j == g.cells[1] ||
                            k == 0 || k == g.cells[2];
                if (bdry) {
                    out(i, j, k) = u(i, j, k);
                    continue;
                }
                out(i, j, k) = (2.0 * u(i, j, k) - u(i - 1, j, k) - u(i + 1, j, k)) * ix2 +
                               (2.0 * u(i, j, k) - u(i, j - 1, k) - u(i, j + 1, k)) * iy2 +
                               (2.0 * u(i, j, k) - u(i, j, k - 1) - u(i, j, k + 1)) * iz2;
            }
    return out;
}

NodeField apply_weighted_neg_div_grad(const EdgeField& sig_e, const NodeField& phi) {
    const Grid& g = phi.grid();
    require_same_grid(sig_e.grid(), g, "apply_weighted_neg_div_grad");
    NodeField out(g);
    const double ix2 = 1.0 / (g.h[0] * g.h[0]);
    const double iy2 = 1.0 / (g.h[1] * g.h[1]);
    const double iz2 = 1.0 / (g.h[2] * g.h[2]);
    for (int k = 0; k <= g.cells[2]; ++k)
        for (int j = 0; j <= g.cells[1]; ++j)
            for (int i = 0; i <= g.cells[0]; ++i) {
                bool bdry = i == 0 || i == g.cells[0] || j == 0 || j == g.cells[1] ||
                            k == 0 || k == g.cells[2];
                if (bdry) {
                    out(i, j, k) = phi(i, j, k);
                    continue;
                }
                double c = phi(i, j, k);
                out(i, j, k) =
                    (sig_e.at(0, i - 1, j, k) * (c - phi(i - 1, j, k)) +
                     sig_e.at(0, i, j, k) * (c - phi(i + 1, j, k))) * ix2 +
                    (sig_e.at(1, i, j - 1, k) * (c - phi(i, j - 1, k)) +
                     sig_e.at(1, i, j, k) * (c - phi(i, j + 1, k))) * iy2 +
                    (sig_e.at(2, i, j, k - 1) * (c - phi(i, j, k - 1)) +
                     sig_e.at(2, i, j, k) * (c - phi(i, j, k + 1))) * iz2;
            }
    return out;
}

NodeField avg_edge_to_node(const EdgeField& q) {
    const Grid& g = q.grid();
    NodeField out(g);
    for (int k = 0; k <= g.cells[2]; ++k)
        for (int j = 0; j <= g.cells[1]; ++j)
            for (int i = 0; i <= g.cells[0]; ++i) {
                std::array<int, 3> p{i, j, k};
                double total = 0.0;
                for (int c = 0; c < 3; ++c) {
                    double sum = 0.0;
                    int cnt = 0;
                    if (p[c] > 0) {
                        std::array<int, 3> e = p;
                        e[c] -= 1;
                        double v = q.at(c, e[0], e[1], e[2]);
                        sum += v * v;
                        ++cnt;
                    }
                    if (p[c] < g.cells[c]) {
                        double v = q.at(c, p[0], p[1], p[2]);
                        sum += v * v;
                        ++cnt;
                    }
                    total += sum / cnt;
                }
                out(i, j, k) = total;
            }
    return out;
}

static double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double dot_nodes(const NodeField& a, const NodeField& b) {
    return dot_vec(a.data(), b.data()) * a.grid().cell_volume();
}

double dot_edges(const EdgeField& a, const EdgeField& b) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += dot_vec(a.comp(c), b.comp(c));
    return s * a.grid().cell_volume();
}

double norm2_nodes(const NodeField& a) { return std::sqrt(dot_nodes(a, a)); }
double norm2_edges(const EdgeField& a) { return std::sqrt(dot_edges(a, a)); }

double norm2_faces(const FaceField& a) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += dot_vec(a.comp(c), a.comp(c));
    return std::sqrt(s * a.grid().cell_volume());
}

double norm2_cells(const CellField& a) {
    return std::sqrt(dot_vec(a.data(), a.data()) * a.grid().cell_volume());
}

EdgeField edge_multiply(const EdgeField& a, const EdgeField& b) {
    require_same_grid(a.grid(), b.grid(), "edge_multiply");
    EdgeField out(a.grid());
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < out.comp(c).size(); ++i)
            out.comp(c)[i] = a.comp(c)[i] * b.comp(c)[i];
    return out;
}

EdgeField edge_axpy(double alpha, const EdgeField& x, const EdgeField& y) {
    require_same_grid(x.grid(), y.grid(), "edge_axpy");
    EdgeField out(x.grid());
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < out.comp(c).size(); ++i)
            out.comp(c)[i] = alpha * x.comp(c)[i] + y.comp(c)[i];
    return out;
}

EdgeField node_to_edge_average(const NodeField& a) {
    const Grid& g = a.grid();
    EdgeField out(g);
    for (int c = 0; c < 3; ++c) {
        const Box3& b = out.box(c);
        std::array<int, 3> step{c == 0, c == 1, c == 2};
        for (int k = 0; k < b.dims[2]; ++k)
            for (int j = 0; j < b.dims[1]; ++j)
                for (int i = 0; i < b.dims[0]; ++i)
                    out.at(c, i, j, k) =
                        0.5 * (a(i, j, k) + a(i + step[0], j + step[1], k + step[2]));
    }
    return out;
}

}  // namespace thermel
