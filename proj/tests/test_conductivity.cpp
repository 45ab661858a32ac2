#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "thermel/conductivity.hpp"

using namespace thermel;
using namespace thermel::testing;

TEST_CASE("constant model: flat value, zero Lipschitz constant") {
    auto m = ConductivityModel::constant(2.5);
    CHECK(m(-1e9) == 2.5);
    CHECK(m(0.0) == 2.5);
    CHECK(m(1e9) == 2.5);
    CHECK(m.sigma_min() == 2.5);
    CHECK(m.sigma_max() == 2.5);
    CHECK(m.lipschitz() == 0.0);
    CHECK(m.derivative(3.0) == 0.0);
    CHECK_THROWS_AS(ConductivityModel::constant(0.0), std::invalid_argument);
}

TEST_CASE("sigmoid model respects its certified bounds on a million samples") {
    auto m = ConductivityModel::bounded_sigmoid(0.5, 3.0, 1.0, 0.25);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1e6, 1e6);
    for (int n = 0; n < 1000000; ++n) {
        double v = m(unif(rng));
        CHECK(v >= 0.5);
        CHECK(v <= 3.0);
    }
    // overflow-safe tails
    CHECK(m(-1e308) == doctest::Approx(0.5));
    CHECK(m(1e308) == doctest::Approx(3.0));
}

TEST_CASE("sigmoid Lipschitz constant bounds every difference quotient") {
    auto m = ConductivityModel::bounded_sigmoid(1.0, 2.0, 0.0, 0.5);
    CHECK(m.lipschitz() == doctest::Approx((2.0 - 1.0) / (4.0 * 0.5)));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unif(-20.0, 20.0);
    for (int n = 0; n < 100000; ++n) {
        double a = unif(rng), b = unif(rng);
        if (a == b) continue;
        double q = std::abs(m(a) - m(b)) / std::abs(a - b);
        CHECK(q <= m.lipschitz() * (1.0 + 1e-12));
    }
}

TEST_CASE("sigmoid derivative matches a central difference") {
    auto m = ConductivityModel::bounded_sigmoid(1.0, 2.0, 0.3, 0.7);
    for (double s : {-2.0, -0.5, 0.3, 1.0, 4.0}) {
        double h = 1e-6;
        double fd = (m(s + h) - m(s - h)) / (2.0 * h);
        CHECK(m.derivative(s) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("table model interpolates, clamps, and certifies bounds") {
    auto m = ConductivityModel::table({{0.0, 1.0}, {0.5, 3.0}, {1.0, 2.0}});
    CHECK(m(-5.0) == 1.0);   // clamped left
    CHECK(m(5.0) == 2.0);    // clamped right
    CHECK(m(0.25) == doctest::Approx(2.0));
    CHECK(m(0.75) == doctest::Approx(2.5));
    CHECK(m.sigma_min() == 1.0);
    CHECK(m.sigma_max() == 3.0);
    CHECK(m.lipschitz() == doctest::Approx(4.0));  // steepest segment
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(-10.0, 10.0);
    for (int n = 0; n < 1000000; ++n) {
        double v = m(unif(rng));
        CHECK(v >= 1.0);
        CHECK(v <= 3.0);
    }
}

TEST_CASE("table rejects malformed input") {
    CHECK_THROWS_AS(ConductivityModel::table({{0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(ConductivityModel::table({{0.0, 1.0}, {0.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(ConductivityModel::table({{0.0, 1.0}, {1.0, -2.0}}), std::invalid_argument);
}

TEST_CASE("eval_sigma names the offending node on non-finite input") {
    Grid g(2, 2, 2);
    NodeField u(g);
    u(1, 2, 1) = std::numeric_limits<double>::infinity();
    auto m = ConductivityModel::constant(1.0);
    CHECK_THROWS_WITH_AS(eval_sigma(m, u), doctest::Contains("(1,2,1)"), std::invalid_argument);
}

TEST_CASE("edge conductivities are harmonic means of the endpoint values") {
    Grid g(2, 2, 2);
    NodeField s(g);
    for (double& v : s.data()) v = 2.0;
    s(1, 0, 0) = 4.0;
    EdgeField e = sigma_to_edges(s);
    // x-edge from (0,0,0)=2 to (1,0,0)=4: 2*2*4/(2+4)
    CHECK(e.at(0, 0, 0, 0) == doctest::Approx(2.6666666666666665).epsilon(1e-15));
    // harmonic mean lies between the endpoint values and below their mean
    CHECK(e.at(0, 0, 0, 0) >= 2.0);
    CHECK(e.at(0, 0, 0, 0) <= 3.0);
    s(1, 1, 1) = 0.0;
    CHECK_THROWS_AS(sigma_to_edges(s), std::invalid_argument);
}
