#pragma once

#include "thermel/grid.hpp"

namespace thermel {

/// Boundary flags for nodes, edges and faces of one grid.  An edge or face is
/// boundary iff it lies in one of the six boundary planes; the sets are
/// mutually consistent by construction.
struct BoundaryMask {
    explicit BoundaryMask(const Grid& g);

    const Grid& grid() const { return grid_; }

    bool node(int i, int j, int k) const {
        return i == 0 || i == grid_.cells[0] || j == 0 || j == grid_.cells[1] ||
               k == 0 || k == grid_.cells[2];
    }
    /// Component-c edge lying in a boundary plane (necessarily transversal to c).
    bool edge(int c, int i, int j, int k) const {
        std::array<int, 3> p{i, j, k};
        for (int a = 0; a < 3; ++a)
            if (a != c && (p[a] == 0 || p[a] == grid_.cells[a])) return true;
        return false;
    }
    /// Component-c face on the boundary (normal to the boundary plane).
    bool face_normal_boundary(int c, int i, int j, int k) const {
        std::array<int, 3> p{i, j, k};
        (void)j;
        (void)k;
        return p[c] == 0 || p[c] == grid_.cells[c];
    }
    std::size_t interior_node_count() const { return interior_nodes_; }

  private:
    Grid grid_;
    std::size_t interior_nodes_ = 0;
};

/// Two-point difference gradient: component d on an edge is the endpoint
/// difference divided by h_d.  Exact for linear fields; midpoint-exact for
/// products of coordinates.
EdgeField grad(const NodeField& phi);

/// Negative adjoint of grad under the plain staggered inner products:
/// <grad phi, J>_edges = -<phi, div J>_nodes for phi vanishing on the
/// boundary.  Values are written at interior nodes only; boundary rows are
/// left zero for the caller.
NodeField div_edge(const EdgeField& J);

/// Yee circulation of a face field, producing an edge field on interior
/// edges (edges in boundary planes are left zero: the transversal
/// differences are not available there).
EdgeField curl_face_to_edge(const FaceField& H);

/// Yee circulation of an edge field, producing a face field on all faces.
/// div_face(curl_edge_to_face(A)) = 0 and curl_edge_to_face(grad(psi)) = 0
/// hold exactly.
FaceField curl_edge_to_face(const EdgeField& A);

/// Cell-centered divergence of a face field; exact null space of the dual curl.
CellField div_face(const FaceField& H);

/// 7-point -Laplacian applied to u at interior nodes; boundary rows are
/// identity rows pinned to u (so the full operator stays SPD with the
/// discrete maximum principle).
NodeField apply_neg_laplacian(const NodeField& u);

/// -div(sig_e . grad phi) at interior nodes, identity rows on the boundary.
NodeField apply_weighted_neg_div_grad(const EdgeField& sig_e, const NodeField& phi);

/// Pointwise squared magnitude at nodes from edge samples: per component the
/// mean of the squares on the adjacent edges of that direction, summed over
/// components.  Nonnegative by construction.
NodeField avg_edge_to_node(const EdgeField& q);

// -------- staggered inner products and norms (plain uniform weights) --------

double dot_nodes(const NodeField& a, const NodeField& b);
double dot_edges(const EdgeField& a, const EdgeField& b);
double norm2_nodes(const NodeField& a);
double norm2_edges(const EdgeField& a);
double norm2_faces(const FaceField& a);
double norm2_cells(const CellField& a);

// -------- elementwise helpers --------

EdgeField edge_multiply(const EdgeField& a, const EdgeField& b);
EdgeField edge_axpy(double alpha, const EdgeField& x, const EdgeField& y);  // alpha*x + y
/// Arithmetic average of node values to edge midpoints.
EdgeField node_to_edge_average(const NodeField& a);

}  // namespace thermel
