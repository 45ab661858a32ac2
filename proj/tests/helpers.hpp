#pragma once

#include <cmath>
#include <random>

#include "thermel/grid.hpp"

namespace thermel::testing {

inline NodeField random_nodes(const Grid& g, std::uint64_t seed, double lo = -1.0,
                              double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(lo, hi);
    NodeField f(g);
    for (double& v : f.data()) v = unif(rng);
    return f;
}

inline EdgeField random_edges(const Grid& g, std::uint64_t seed, double lo = -1.0,
                              double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(lo, hi);
    EdgeField f(g);
    for (int c = 0; c < 3; ++c)
        for (double& v : f.comp(c)) v = unif(rng);
    return f;
}

inline FaceField random_faces(const Grid& g, std::uint64_t seed, double lo = -1.0,
                              double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(lo, hi);
    FaceField f(g);
    for (int c = 0; c < 3; ++c)
        for (double& v : f.comp(c)) v = unif(rng);
    return f;
}

template <typename Fn>
NodeField sample_nodes(const Grid& g, Fn&& fn) {
    NodeField f(g);
    for (int k = 0; k <= g.cells[2]; ++k)
        for (int j = 0; j <= g.cells[1]; ++j)
            for (int i = 0; i <= g.cells[0]; ++i) f(i, j, k) = fn(g.node_pos(i, j, k));
    return f;
}

inline double max_abs_diff_nodes(const NodeField& a, const NodeField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

inline double max_abs_diff_edges(const EdgeField& a, const EdgeField& b) {
    double m = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < a.comp(c).size(); ++i)
            m = std::max(m, std::abs(a.comp(c)[i] - b.comp(c)[i]));
    return m;
}

inline double max_abs_edges(const EdgeField& a) {
    double m = 0.0;
    for (int c = 0; c < 3; ++c)
        for (double v : a.comp(c)) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs_faces(const FaceField& a) {
    double m = 0.0;
    for (int c = 0; c < 3; ++c)
        for (double v : a.comp(c)) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace thermel::testing
