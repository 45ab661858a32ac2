#include "thermel/conductivity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thermel {

namespace detail {
void check_finite(const std::vector<double>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]))
            throw std::invalid_argument(std::string(what) + ": non-finite value at flat index " +
                                        std::to_string(i));
}
}  // namespace detail

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": grid shape mismatch");
}

ConductivityModel ConductivityModel::constant(double sigma0) {
    if (!(sigma0 > 0.0))
        throw std::invalid_argument("ConductivityModel::constant: sigma0 must be positive");
    ConductivityModel m;
    m.kind_ = Kind::Constant;
    m.sigma1_ = m.sigma2_ = sigma0;
    m.lip_ = 0.0;
    return m;
}

ConductivityModel ConductivityModel::bounded_sigmoid(double sigma_lo, double sigma_hi,
                                                     double s0, double w) {
    if (!(sigma_lo > 0.0) || sigma_hi < sigma_lo)
        throw std::invalid_argument("ConductivityModel::bounded_sigmoid: need 0 < sigma_lo <= sigma_hi");
    if (!(w > 0.0))
        throw std::invalid_argument("ConductivityModel::bounded_sigmoid: width must be positive");
    ConductivityModel m;
    m.kind_ = Kind::BoundedSigmoid;
    m.sigma1_ = sigma_lo;
    m.sigma2_ = sigma_hi;
    m.s0_ = s0;
    m.w_ = w;
    // max slope of the logistic is (hi-lo)/(4w), attained at s0
    m.lip_ = (sigma_hi - sigma_lo) / (4.0 * w);
    return m;
}

ConductivityModel ConductivityModel::table(std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2)
        throw std::invalid_argument("ConductivityModel::table: need at least 2 points");
    double lo = pts[0].second, hi = pts[0].second, lip = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!(pts[i].second > 0.0))
            throw std::invalid_argument("ConductivityModel::table: values must be positive");
        lo = std::min(lo, pts[i].second);
        hi = std::max(hi, pts[i].second);
        if (i > 0) {
            double ds = pts[i].first - pts[i - 1].first;
            if (!(ds > 0.0))
                throw std::invalid_argument("ConductivityModel::table: abscissae must be strictly increasing");
            lip = std::max(lip, std::abs(pts[i].second - pts[i - 1].second) / ds);
        }
    }
    ConductivityModel m;
    m.kind_ = Kind::Table;
    m.pts_ = std::move(pts);
    m.sigma1_ = lo;
    m.sigma2_ = hi;
    m.lip_ = lip;
    return m;
}

double ConductivityModel::operator()(double s) const {
    switch (kind_) {
        case Kind::Constant:
            return sigma1_;
        case Kind::BoundedSigmoid: {
            double t = (s - s0_) / w_;
            // evaluate the logistic in a form that cannot overflow
            double g = t >= 0.0 ? 1.0 / (1.0 + std::exp(-t))
                                : std::exp(t) / (1.0 + std::exp(t));
            return sigma1_ + (sigma2_ - sigma1_) * g;
        }
        case Kind::Table: {
            if (s <= pts_.front().first) return pts_.front().second;
            if (s >= pts_.back().first) return pts_.back().second;
            auto it = std::upper_bound(pts_.begin(), pts_.end(), s,
                                       [](double a, const std::pair<double, double>& p) {
                                           return a < p.first;
                                       });
            auto lo = *(it - 1);
            auto hi = *it;
            double t = (s - lo.first) / (hi.first - lo.first);
            return lo.second + t * (hi.second - lo.second);
        }
    }
    return sigma1_;
}

double ConductivityModel::derivative(double s) const {
    switch (kind_) {
        case Kind::Constant:
            return 0.0;
        case Kind::BoundedSigmoid: {
            double t = (s - s0_) / w_;
            double g = t >= 0.0 ? 1.0 / (1.0 + std::exp(-t))
                                : std::exp(t) / (1.0 + std::exp(t));
            return (sigma2_ - sigma1_) * g * (1.0 - g) / w_;
        }
        case Kind::Table: {
            if (s <= pts_.front().first || s >= pts_.back().first) return 0.0;
            auto it = std::upper_bound(pts_.begin(), pts_.end(), s,
                                       [](double a, const std::pair<double, double>& p) {
                                           return a < p.first;
                                       });
            auto lo = *(it - 1);
            auto hi = *it;
            return (hi.second - lo.second) / (hi.first - lo.first);
        }
    }
    return 0.0;
}

NodeField eval_sigma(const ConductivityModel& model, const NodeField& u) {
    const auto& b = u.box();
    NodeField out(u.grid());
    for (int k = 0; k < b.dims[2]; ++k)
        for (int j = 0; j < b.dims[1]; ++j)
            for (int i = 0; i < b.dims[0]; ++i) {
                double s = u(i, j, k);
                if (!std::isfinite(s))
                    throw std::invalid_argument("eval_sigma: non-finite temperature at node (" +
                                                std::to_string(i) + "," + std::to_string(j) + "," +
                                                std::to_string(k) + ")");
                out(i, j, k) = model(s);
            }
    return out;
}

EdgeField sigma_to_edges(const NodeField& sig_nodes) {
    const Grid& g = sig_nodes.grid();
    EdgeField out(g);
    for (int c = 0; c < 3; ++c) {
        const Box3& b = out.box(c);
        std::array<int, 3> step{c == 0, c == 1, c == 2};
        for (int k = 0; k < b.dims[2]; ++k)
            for (int j = 0; j < b.dims[1]; ++j)
                for (int i = 0; i < b.dims[0]; ++i) {
                    double a = sig_nodes(i, j, k);
                    double bb = sig_nodes(i + step[0], j + step[1], k + step[2]);
                    if (!(a > 0.0) || !(bb > 0.0))
                        throw std::invalid_argument("sigma_to_edges: non-positive node conductivity");
                    out.at(c, i, j, k) = 2.0 * a * bb / (a + bb);
                }
    }
    return out;
}

}  // namespace thermel
