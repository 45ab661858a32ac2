#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermel {

/// Axis-aligned box [0,L1]x[0,L2]x[0,L3] split into n1 x n2 x n3 cells.
/// Degrees of freedom follow the Yee/MAC staggering: scalars at nodes,
/// vector components at edge midpoints (edges) or face centers (faces).
struct Grid {
    std::array<double, 3> extent{1.0, 1.0, 1.0};
    std::array<int, 3> cells{2, 2, 2};
    std::array<double, 3> h{0.5, 0.5, 0.5};

    Grid() = default;

    Grid(int n1, int n2, int n3, double L1 = 1.0, double L2 = 1.0, double L3 = 1.0)
        : extent{L1, L2, L3}, cells{n1, n2, n3} {
        for (int d = 0; d < 3; ++d) {
            if (cells[d] < 2)
                throw std::invalid_argument("Grid: need at least 2 cells per axis");
            if (!(extent[d] > 0.0))
                throw std::invalid_argument("Grid: extents must be positive");
            h[d] = extent[d] / cells[d];
        }
    }

    int nodes(int d) const { return cells[d] + 1; }
    std::size_t node_count() const {
        return std::size_t(nodes(0)) * nodes(1) * nodes(2);
    }
    std::size_t cell_count() const {
        return std::size_t(cells[0]) * cells[1] * cells[2];
    }
    /// Count along axis a of the component-c edge array.
    int edge_dim(int c, int a) const { return a == c ? cells[a] : cells[a] + 1; }
    /// Count along axis a of the component-c face array.
    int face_dim(int c, int a) const { return a == c ? cells[a] + 1 : cells[a]; }

    double cell_volume() const { return h[0] * h[1] * h[2]; }

    std::array<double, 3> node_pos(int i, int j, int k) const {
        return {i * h[0], j * h[1], k * h[2]};
    }
    /// Midpoint of the component-c edge with array index (i,j,k).
    std::array<double, 3> edge_pos(int c, int i, int j, int k) const {
        std::array<double, 3> p{i * h[0], j * h[1], k * h[2]};
        p[c] += 0.5 * h[c];
        return p;
    }
    /// Center of the component-c face with array index (i,j,k).
    std::array<double, 3> face_pos(int c, int i, int j, int k) const {
        std::array<double, 3> p{i * h[0], j * h[1], k * h[2]};
        for (int a = 0; a < 3; ++a)
            if (a != c) p[a] += 0.5 * h[a];
        return p;
    }

    bool same_shape(const Grid& o) const {
        return cells == o.cells && extent == o.extent;
    }
};

/// Row-major-in-k 3D indexer: idx = i + d0*(j + d1*k).
struct Box3 {
    std::array<int, 3> dims{0, 0, 0};
    Box3() = default;
    Box3(int d0, int d1, int d2) : dims{d0, d1, d2} {}
    std::size_t size() const {
        return std::size_t(dims[0]) * dims[1] * dims[2];
    }
    std::size_t idx(int i, int j, int k) const {
        return std::size_t(i) + std::size_t(dims[0]) * (std::size_t(j) + std::size_t(dims[1]) * k);
    }
};

namespace detail {
void check_finite(const std::vector<double>& v, const char* what);
}

/// Scalar samples at grid nodes (temperature u, potentials phi, psi0).
class NodeField {
  public:
    NodeField() = default;
    explicit NodeField(const Grid& g)
        : grid_(g), box_(g.nodes(0), g.nodes(1), g.nodes(2)), v_(box_.size(), 0.0) {}

    const Grid& grid() const { return grid_; }
    const Box3& box() const { return box_; }
    std::size_t size() const { return v_.size(); }

    double& operator()(int i, int j, int k) { return v_[box_.idx(i, j, k)]; }
    double operator()(int i, int j, int k) const { return v_[box_.idx(i, j, k)]; }
    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }

    void require_finite(const char* what = "NodeField") const {
        detail::check_finite(v_, what);
    }

  private:
    Grid grid_;
    Box3 box_;
    std::vector<double> v_;
};

/// Vector field with component d sampled at midpoints of d-parallel edges
/// (electric fields, currents, gradients).
class EdgeField {
  public:
    EdgeField() = default;
    explicit EdgeField(const Grid& g) : grid_(g) {
        for (int c = 0; c < 3; ++c) {
            box_[c] = Box3(g.edge_dim(c, 0), g.edge_dim(c, 1), g.edge_dim(c, 2));
            v_[c].assign(box_[c].size(), 0.0);
        }
    }

    const Grid& grid() const { return grid_; }
    const Box3& box(int c) const { return box_[c]; }

    double& at(int c, int i, int j, int k) { return v_[c][box_[c].idx(i, j, k)]; }
    double at(int c, int i, int j, int k) const { return v_[c][box_[c].idx(i, j, k)]; }
    std::vector<double>& comp(int c) { return v_[c]; }
    const std::vector<double>& comp(int c) const { return v_[c]; }

    std::size_t total_size() const {
        return v_[0].size() + v_[1].size() + v_[2].size();
    }

    void require_finite(const char* what = "EdgeField") const {
        for (int c = 0; c < 3; ++c) detail::check_finite(v_[c], what);
    }

  private:
    Grid grid_;
    std::array<Box3, 3> box_;
    std::array<std::vector<double>, 3> v_;
};

/// Vector field with component d sampled at centers of faces normal to d
/// (magnetic field H).
class FaceField {
  public:
    FaceField() = default;
    explicit FaceField(const Grid& g) : grid_(g) {
        for (int c = 0; c < 3; ++c) {
            box_[c] = Box3(g.face_dim(c, 0), g.face_dim(c, 1), g.face_dim(c, 2));
            v_[c].assign(box_[c].size(), 0.0);
        }
    }

    const Grid& grid() const { return grid_; }
    const Box3& box(int c) const { return box_[c]; }

    double& at(int c, int i, int j, int k) { return v_[c][box_[c].idx(i, j, k)]; }
    double at(int c, int i, int j, int k) const { return v_[c][box_[c].idx(i, j, k)]; }
    std::vector<double>& comp(int c) { return v_[c]; }
    const std::vector<double>& comp(int c) const { return v_[c]; }

    std::size_t total_size() const {
        return v_[0].size() + v_[1].size() + v_[2].size();
    }

    void require_finite(const char* what = "FaceField") const {
        for (int c = 0; c < 3; ++c) detail::check_finite(v_[c], what);
    }

  private:
    Grid grid_;
    std::array<Box3, 3> box_;
    std::array<std::vector<double>, 3> v_;
};

/// Scalar samples at cell centers (discrete divergence of face fields).
class CellField {
  public:
    CellField() = default;
    explicit CellField(const Grid& g)
        : grid_(g), box_(g.cells[0], g.cells[1], g.cells[2]), v_(box_.size(), 0.0) {}

    const Grid& grid() const { return grid_; }
    const Box3& box() const { return box_; }

    double& operator()(int i, int j, int k) { return v_[box_.idx(i, j, k)]; }
    double operator()(int i, int j, int k) const { return v_[box_.idx(i, j, k)]; }
    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }

  private:
    Grid grid_;
    Box3 box_;
    std::vector<double> v_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace thermel
