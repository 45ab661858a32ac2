#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "thermel/linear_solve.hpp"

namespace thermel::detail {

/// Preconditioned conjugate gradients over raw vectors.  op and prec must be
/// linear and symmetric; project (optional) removes a known null-space
/// component and is applied to residuals and search data each iteration.
struct CgProblem {
    std::function<std::vector<double>(const std::vector<double>&)> op;
    std::function<std::vector<double>(const std::vector<double>&)> prec;
    std::function<void(std::vector<double>&)> project;
};

inline LinearSolveReport run_cg(const CgProblem& p, const std::vector<double>& b,
                                std::vector<double>& x, double tol, int maxiter) {
    LinearSolveReport rep;
    const std::size_t n = b.size();
    auto dot = [](const std::vector<double>& a, const std::vector<double>& c) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * c[i];
        return s;
    };
    x.assign(n, 0.0);
    double norm_b = std::sqrt(dot(b, b));
    if (norm_b == 0.0) {
        rep.converged = true;
        return rep;
    }
    std::vector<double> r = b;
    if (p.project) p.project(r);
    std::vector<double> z = p.prec(r);
    if (p.project) p.project(z);
    std::vector<double> d = z;
    double rz = dot(r, z);
    double res = std::sqrt(dot(r, r));
    while (res / norm_b > tol && rep.iterations < maxiter) {
        std::vector<double> q = p.op(d);
        if (p.project) p.project(q);
        ++rep.operator_applications;
        double dq = dot(d, q);
        if (!(dq > 0.0))
            throw std::runtime_error("cg: non-positive curvature, operator is not SPD");
        double alpha = rz / dq;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * d[i];
            r[i] -= alpha * q[i];
        }
        z = p.prec(r);
        if (p.project) p.project(z);
        double rz_new = dot(r, z);
        double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) d[i] = z[i] + beta * d[i];
        res = std::sqrt(dot(r, r));
        ++rep.iterations;
    }
    rep.rel_residual = res / norm_b;
    rep.converged = rep.rel_residual <= tol;
    return rep;
}

}  // namespace thermel::detail
