#include <cmath>

#include "doctest.h"
#include "wfg/grid.hpp"

using namespace wfg;

namespace {
SampledSignal sample(const AxisSpec& ax, double (*f)(double)) {
    CVec v(ax.n);
    for (int j = 0; j < ax.n; ++j) v[j] = f(ax.x(j));
    return SampledSignal(ax, v);
}
double gauss(double x) { return std::pow(kPi, -0.25) * std::exp(-x * x / 2); }
double one(double) { return 1.0; }
}  // namespace

TEST_CASE("axis spacing and dual grid") {
    AxisSpec ax(20.0, 1024);
    CHECK(ax.dx() == doctest::Approx(40.0 / 1024));
    CHECK(ax.xi_max() == doctest::Approx(kPi * 1024 / 40.0));
    CHECK(ax.xi(512) == 0.0);
    CHECK(ax.dual().L == doctest::Approx(ax.xi_max()));
    auto b = AxisSpec::balanced(2048);
    CHECK(b.L == doctest::Approx(b.xi_max()));
    CHECK_THROWS_AS(AxisSpec(20.0, 1000).validate(), GridError);
    CHECK_THROWS_AS(AxisSpec(-1.0, 1024).validate(), GridError);
}

TEST_CASE("boundary mass flags truncated signals") {
    AxisSpec ax(20.0, 1024);
    CHECK_FALSE(sample(ax, gauss).aliased());
    CHECK(sample(ax, one).aliased());
}

TEST_CASE("gaussian l2 norm is one") {
    AxisSpec ax(20.0, 1024);
    CHECK(l2_norm(sample(ax, gauss)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("schwartz seminorm of a gaussian matches closed form") {
    // sup (1 + x^2)^{1/2} e^{-x^2/2} is attained at x = 0.
    AxisSpec ax(20.0, 4096);
    auto u = sample(ax, gauss);
    auto r = schwartz_seminorm(u, 0, 1);
    CHECK(r.value == doctest::Approx(std::pow(kPi, -0.25)).epsilon(1e-9));
    CHECK_FALSE(r.alias_warning);
    // rho_{1,0} = sup |x| e^{-x^2/2} pi^{-1/4} + sup e^{-x^2/2} pi^{-1/4}
    auto r1 = schwartz_seminorm(u, 1, 0);
    CHECK(r1.value == doctest::Approx((1 + std::exp(-0.5)) * std::pow(kPi, -0.25)).epsilon(1e-4));
    CHECK(schwartz_seminorm(sample(ax, one), 1, 0).alias_warning);
}

TEST_CASE("directions and cones") {
    auto d = Direction::from_degrees(90);
    CHECK(d.w[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(d.degrees() == doctest::Approx(90));
    CHECK(uniform_directions(8).size() == 8);
    CHECK(angular_distance(0.1, 2 * kPi - 0.1) == doctest::Approx(0.2));
    ConicRegion g;
    g.add(Direction::from_degrees(0), 0.1);
    CHECK(g.contains({1.0, 0.05}));
    CHECK_FALSE(g.contains({1.0, 0.5}));
    CHECK_FALSE(g.contains({0.0, 0.0}));
}

TEST_CASE("geometric radii stay below r_max") {
    auto r = geometric_radii(4.0, 1.25, 45.0);
    REQUIRE(!r.empty());
    CHECK(r.front() == 4.0);
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] * 1.25 <= 45.0 + 1e-9);
    CHECK(shell_outer(r, 0) == doctest::Approx(r[1]));
}

TEST_CASE("decay fit recovers power laws") {
    std::vector<double> r, s;
    for (int i = 0; i < 10; ++i) {
        r.push_back(4 * std::pow(1.25, i));
        s.push_back(std::pow(r.back(), -2.0));
    }
    auto f = fit_decay(r, s, 1e-30);
    CHECK(f.fitted_order == doctest::Approx(2.0));
    CHECK(f.classification == DecayClass::SLOW);
    CHECK(f.r_squared > 0.99);

    std::vector<double> g;
    for (double x : r) g.push_back(std::exp(-x * x / 4));
    auto fr = fit_decay(r, g, 1e-12);
    CHECK(fr.classification == DecayClass::RAPID);

    std::vector<double> flat(r.size(), 1e-20);
    auto ff = fit_decay(r, flat, 1e-12);
    CHECK(ff.classification == DecayClass::RAPID);
    CHECK(std::isinf(ff.fitted_order));

    std::vector<double> few(r.begin(), r.begin() + 3), fs(s.begin(), s.begin() + 3);
    CHECK(fit_decay(few, fs, 1e-30).classification == DecayClass::INDETERMINATE);
    CHECK_THROWS_AS(fit_decay({2.0, 1.0, 3.0, 4.0}, {1, 1, 1, 1}, 0.0), EstimatorError);
}

TEST_CASE("decay fit rejects erratic data") {
    std::vector<double> r, s;
    for (int i = 0; i < 10; ++i) {
        r.push_back(4 * std::pow(1.25, i));
        s.push_back(i % 2 ? 1.0 : 1e-3);
    }
    auto f = fit_decay(r, s, 1e-30, FitParams{5, 0.9, 1, 6, 4, false});
    CHECK(f.classification == DecayClass::INDETERMINATE);
}

TEST_CASE("property: fit order is invariant under rescaling sup values") {
    std::vector<double> r;
    for (int i = 0; i < 8; ++i) r.push_back(4 * std::pow(1.25, i));
    for (double order : {1.0, 3.0, 4.5}) {
        for (double scale : {1e-3, 1.0, 1e3}) {
            std::vector<double> s;
            for (double x : r) s.push_back(scale * std::pow(x, -order));
            CHECK(fit_decay(r, s, 1e-40).fitted_order == doctest::Approx(order));
        }
    }
}
