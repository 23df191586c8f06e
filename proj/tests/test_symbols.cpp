#include <cmath>
#include <random>

#include "doctest.h"
#include "wfg/symbols.hpp"

using namespace wfg;

TEST_CASE("symbol evaluation basics") {
    CHECK(SymbolExpr::constant(1.0).eval({3.0, -7.0}) == cplx(1.0));
    CHECK(SymbolExpr::monomial({1, 1}).eval({2.0, 3.0}) == cplx(6.0));
    auto b = SymbolExpr::bump({0.0, 0.0}, 1.0, 3);
    CHECK(b.eval({1.0, 0.0}) == cplx(0.0));
    CHECK(b.eval({0.0, 0.0}) == cplx(1.0));
    CHECK(b.eval({0.5, 0.0}).real() == doctest::Approx(std::pow(0.75, 3)));
}

TEST_CASE("bump symbols vanish exactly outside their ball") {
    auto b = SymbolExpr::bump({1.0, 0.8}, 0.4, 8) * SymbolExpr::monomial({2, 1});
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ud(-3, 3);
    for (int q = 0; q < 500; ++q) {
        double x = ud(rng), xi = ud(rng);
        if (std::hypot(x - 1.0, xi - 0.8) >= 0.4) CHECK(b.eval({x, xi}) == cplx(0.0));
    }
}

TEST_CASE("exact derivatives") {
    auto xxi = SymbolExpr::monomial({1, 1});
    auto dx = differentiate_exact(xxi, {1, 0});
    CHECK(dx.eval({5.0, 3.0}) == cplx(3.0));
    CHECK(differentiate_exact(SymbolExpr::constant(2.0), {1, 0}).terms.empty());
    CHECK(differentiate_exact(SymbolExpr::constant(2.0), {0, 3}).terms.empty());

    // d_x^2 e^{-|z|^2} = (4 x^2 - 2) e^{-|z|^2}
    auto g = SymbolExpr::gaussian({0.0, 0.0}, {1.0, 1.0});
    auto g2 = differentiate_exact(g, {2, 0});
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> ud(-2, 2);
    for (int q = 0; q < 50; ++q) {
        double x = ud(rng), xi = ud(rng);
        double ref = (4 * x * x - 2) * std::exp(-x * x - xi * xi);
        CHECK(std::abs(g2.eval({x, xi}) - ref) < 1e-10);
    }
    // Shifted center: d_xi e^{-2 (xi - 1)^2} = -4 (xi - 1) e^{...}
    auto h = SymbolExpr::gaussian({0.0, 1.0}, {0.0, 2.0});
    auto h1 = differentiate_exact(h, {0, 1});
    CHECK(std::abs(h1.eval({0.3, 0.2}) - (-4 * (0.2 - 1)) * std::exp(-2 * 0.64)) < 1e-12);
}

TEST_CASE("bump derivatives are exact up to p - 2, numeric beyond") {
    auto b = SymbolExpr::bump({0.2, -0.1}, 1.0, 6);
    auto d4 = differentiate_symbol(b, {2, 2});
    CHECK(d4.exact());
    auto d5 = differentiate_symbol(b, {3, 2});
    CHECK_FALSE(d5.exact());
    CHECK_THROWS_AS(differentiate_exact(b, {5, 0}), OrderTooHigh);
    // Exact first derivative against the closed form.
    auto d1 = differentiate_exact(b, {1, 0});
    double x = 0.5, xi = 0.3, q = ((x - 0.2) * (x - 0.2) + (xi + 0.1) * (xi + 0.1));
    CHECK(d1.eval({x, xi}).real() == doctest::Approx(6 * std::pow(1 - q, 5) * (-2 * (x - 0.2))));
}

TEST_CASE("property: dilation identity") {
    auto a = SymbolExpr::bump({1.0, 0.5}, 0.7, 8) * SymbolExpr::monomial({1, 2}) +
             SymbolExpr::gaussian({0.3, -0.2}, {1.5, 0.5}, cplx(0.2, 1.0));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ud(-3, 3), uh(0.05, 1.0);
    for (int q = 0; q < 200; ++q) {
        double h = uh(rng);
        std::vector<double> z{ud(rng), ud(rng)};
        cplx direct = a.eval({h * z[0], h * z[1]});
        CHECK(std::abs(dilate(a, h).eval(z) - direct) <= 1e-12 * (1 + std::abs(direct)));
        CHECK(DilatedSymbol{a, h}.eval(z) == direct);
    }
}

TEST_CASE("property: Leibniz rule matches numeric derivative of the product") {
    auto a = SymbolExpr::gaussian({0.5, 0.0}, {1.0, 0.3}) * SymbolExpr::monomial({1, 0});
    auto b = SymbolExpr::bump({0.0, 0.3}, 1.5, 8) + SymbolExpr::monomial({0, 2}, cplx(0, 1));
    auto ab = a * b;
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> ud(-1, 1);
    for (std::vector<int> al : {std::vector<int>{1, 0}, {0, 1}, {1, 1}, {2, 0}}) {
        auto ex = differentiate_exact(ab, al);
        Derivative num{ab, al, std::nullopt};
        for (int q = 0; q < 20; ++q) {
            std::vector<double> z{ud(rng), ud(rng)};
            CHECK(std::abs(ex.eval(z) - num.eval(z)) < 1e-6);
        }
    }
}

TEST_CASE("shubin seminorm probes") {
    auto pts = box_grid(1, 10.0, 40);
    CHECK(shubin_seminorm_probe(SymbolExpr::constant(1.0), 0, {0, 0}, pts) == doctest::Approx(1.0));
    auto b = SymbolExpr::bump({0.0, 0.0}, 1.0, 6);
    for (std::vector<int> al : {std::vector<int>{0, 0}, {1, 0}, {2, 1}, {2, 2}, {4, 0}}) {
        double v = shubin_seminorm_probe(b, 0, al, pts);
        CHECK(std::isfinite(v));
    }
    auto osc = SymbolExpr::monomial({2, 0}) + SymbolExpr::monomial({0, 2});
    CHECK(shubin_seminorm_probe(osc, 2, {0, 0}, pts) <= 1.0);
}

TEST_CASE("property: declared order stays bounded over an h-ladder") {
    auto pts = box_grid(1, 20.0, 20);
    auto osc = SymbolExpr::monomial({2, 0}) + SymbolExpr::monomial({0, 2});
    for (int k = 0; k <= 16; k += 4) {
        double h = std::pow(0.8, k);
        CHECK(shubin_seminorm_probe(dilate(osc, h), 2, {0, 0}, pts) <= 1.0);
        CHECK(shubin_seminorm_probe(dilate(osc, h), 2, {1, 0}, pts) <= 2.0);
    }
}

TEST_CASE("symbol json round trip") {
    auto a = SymbolExpr::bump({1.0, 0.5}, 0.7, 8) * SymbolExpr::monomial({1, 2}, cplx(0.5, -2)) +
             SymbolExpr::gaussian({0.3, -0.2}, {1.5, 0.5});
    auto j = symbol_to_json(a);
    auto b = symbol_from_json(j);
    CHECK(symbol_to_json(b) == j);
    CHECK(b.eval({0.9, 0.4}) == a.eval({0.9, 0.4}));
    CHECK_THROWS_AS(symbol_from_json(nlohmann::json::parse(R"({"terms":[{"powers":[1]}]})")), ConfigError);
}
