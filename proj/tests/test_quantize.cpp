#include <cmath>
#include <random>

#include "doctest.h"
#include "wfg/quantize.hpp"
#include "wfg/transforms.hpp"

using namespace wfg;

namespace {
SampledSignal coherent(const AxisSpec& ax, double x0, double xi0) {
    CVec v(ax.n);
    for (int j = 0; j < ax.n; ++j) {
        double x = ax.x(j);
        v[j] = std::pow(kPi, -0.25) * std::exp(-(x - x0) * (x - x0) / 2) * std::polar(1.0, xi0 * x);
    }
    return SampledSignal(ax, v);
}
double rel(const SampledSignal& a, const SampledSignal& b) {
    double num = 0, den = 0;
    for (std::size_t j = 0; j < a.values.size(); ++j) num += std::norm(a.values[j] - b.values[j]), den += std::norm(b.values[j]);
    return std::sqrt(num / den);
}
SampledSignal scaled(SampledSignal u, cplx c) {
    for (auto& v : u.values) v *= c;
    return u;
}
SampledSignal sum(SampledSignal a, const SampledSignal& b) {
    for (std::size_t j = 0; j < a.values.size(); ++j) a.values[j] += b.values[j];
    return a;
}
const AxisSpec kAx(16.0, 256);
}  // namespace

TEST_CASE("constant symbol quantizes to the identity for every t") {
    auto u = coherent(kAx, 1.0, -0.5);
    for (double t : {0.0, 0.25, 0.5, 1.0}) {
        auto K = build_kernel(SymbolExpr::constant(1.0), t, kAx);
        CHECK(rel(K.apply(u), u) < 1e-8);
    }
}

TEST_CASE("weyl quantization of xi is -i d/dx") {
    auto u = coherent(kAx, 0.5, 1.0);
    auto K = build_kernel(SymbolExpr::monomial({0, 1}), 0.5, kAx);
    CHECK(rel(K.apply(u), spectral_D(u, 1)) < 1e-7);
}

TEST_CASE("harmonic oscillator ground state has eigenvalue one") {
    auto u = coherent(kAx, 0.0, 0.0);
    auto a = SymbolExpr::monomial({2, 0}) + SymbolExpr::monomial({0, 2});
    auto K = build_kernel(a, 0.5, kAx);
    CHECK(rel(K.apply(u), u) < 1e-8);
    CHECK(rel(apply_quantized(a, 0.5, u), u) < 1e-8);
}

TEST_CASE("real weyl symbols give hermitian kernels") {
    auto a = SymbolExpr::bump({1.0, -0.5}, 1.2, 8) * SymbolExpr::monomial({1, 1}) +
             SymbolExpr::gaussian({0.0, 0.5}, {0.5, 1.0});
    auto K = build_kernel(a, 0.5, kAx);
    double mx = K.K.cwiseAbs().maxCoeff();
    double asym = (K.K - K.K.adjoint()).cwiseAbs().maxCoeff();
    CHECK(asym <= 1e-10 * mx);
    auto u = coherent(kAx, 0.7, -0.3);
    cplx ip = inner(K.apply(u), u);
    CHECK(std::abs(ip.imag()) < 1e-8 * std::norm(l2_norm(u)));
}

TEST_CASE("property: x-independent symbols give the same operator for all t") {
    auto a = SymbolExpr::gaussian({0.0, 0.4}, {0.0, 0.8}) + SymbolExpr::monomial({0, 2}, 0.3);
    auto u = coherent(kAx, -1.0, 0.5);
    auto ref = build_kernel(a, 0.5, kAx).apply(u);
    for (double t : {0.0, 1.0, 0.25}) CHECK(rel(build_kernel(a, t, kAx).apply(u), ref) < 1e-8);
}

TEST_CASE("dense kernel and matrix-free application agree") {
    auto a = SymbolExpr::bump({0.5, 0.2}, 1.0, 8) + SymbolExpr::monomial({1, 1}, cplx(0, 0.5));
    auto u = coherent(kAx, 0.3, 0.1);
    for (double t : {0.0, 0.5, 1.0, 0.75}) {
        auto K = build_kernel(a, t, kAx);
        CHECK(rel(apply_quantized(a, t, u), K.apply(u)) < 1e-10);
        CHECK(rel(K.apply_serial(u), K.apply(u)) < 1e-14);
    }
    auto T = build_midpoint_table(SymbolExpr::bump({0.5, 0.2}, 1.0, 8), 0.5, kAx);
    auto p = T.apply({u})[0], s = T.apply_serial({u})[0];
    CHECK(rel(p, s) < 1e-14);
}

TEST_CASE("property: dilated kernel equals kernel of the materialized symbol") {
    auto a = SymbolExpr::bump({1.0, 0.0}, 0.3, 8);
    for (double h : {1.0, 0.5, 0.2}) {
        auto K1 = build_kernel(DilatedSymbol{a, h}, 0.5, kAx);
        auto K2 = build_kernel(dilate(a, h), 0.5, kAx);
        CHECK((K1.K - K2.K).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("symbols without xi decay are rejected") {
    auto g = SymbolExpr::gaussian({0.0, 0.0}, {1.0, 0.0});
    CHECK_NOTHROW(build_kernel(g, 0.5, kAx));  // polynomial in xi: differential path
    auto wide = SymbolExpr::bump({0.0, 0.0}, 100.0, 8);
    CHECK_THROWS_AS(build_kernel(wide, 0.5, kAx), UnsupportedSymbol);
    CHECK_THROWS_AS(build_kernel(SymbolExpr::bump({0.0, 0.0}, 1.0, 8), 0.3, kAx), UnsupportedSymbol);
}

TEST_CASE("weyl-wigner pairing") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> ud(-1, 1);
    AxisSpec ax(16.0, 512);
    for (int trial = 0; trial < 3; ++trial) {
        auto a = SymbolExpr::gaussian({ud(rng), ud(rng)}, {0.7, 0.4}) +
                 SymbolExpr::bump({ud(rng), ud(rng)}, 1.5 + ud(rng), 8);
        auto u = coherent(ax, ud(rng), ud(rng));
        auto g = coherent(ax, ud(rng), ud(rng));
        cplx lhs = inner(apply_quantized(a, 0.5, u), g);
        auto W = wigner(u, g);
        cplx rhs = 0;
        for (std::size_t i = 0; i < W.xs.size(); ++i)
            for (std::size_t k = 0; k < W.xis.size(); ++k) rhs += a.eval({W.xs[i], W.xis[k]}) * W.at(i, k);
        rhs *= ax.dx() * ax.dxi() / (2 * kPi);
        CHECK(std::abs(lhs - rhs) < 1e-5 * std::abs(rhs));
    }
}

TEST_CASE("weyl product: x # xi = x xi + i/2") {
    auto r = weyl_product_expand(SymbolExpr::monomial({1, 0}), SymbolExpr::monomial({0, 1}), 2);
    auto ref = SymbolExpr::monomial({1, 1}) + SymbolExpr::constant(cplx(0, 0.5));
    CHECK(symbol_to_json(r) == symbol_to_json(ref));
}

TEST_CASE("weyl product with the constant one") {
    auto a = SymbolExpr::bump({0.3, 0.1}, 1.0, 8) * SymbolExpr::monomial({1, 0}) +
             SymbolExpr::gaussian({0.0, 0.0}, {1.0, 2.0});
    for (int N : {1, 2, 3}) {
        auto r = weyl_product_expand(a, SymbolExpr::constant(1.0), N);
        for (std::vector<double> z : {std::vector<double>{0.2, 0.4}, {-0.5, 0.1}})
            CHECK(std::abs(r.eval(z) - a.eval(z)) < 1e-14);
    }
}

TEST_CASE("weyl product of x^2 and xi^2 matches operator composition") {
    auto a = SymbolExpr::monomial({2, 0}), b = SymbolExpr::monomial({0, 2});
    auto c = weyl_product_expand(a, b, 3);
    auto u = coherent(kAx, 0.5, -0.5);
    auto lhs = build_kernel(c, 0.5, kAx).apply(u);
    auto rhs = build_kernel(a, 0.5, kAx).apply(build_kernel(b, 0.5, kAx).apply(u));
    CHECK(rel(lhs, rhs) < 1e-4);
    // Higher orders vanish for polynomials of degree two.
    auto c5 = weyl_product_expand(a, b, 5);
    CHECK(symbol_to_json(c5) == symbol_to_json(c));
}

TEST_CASE("property: composition law for degree <= 2 polynomials") {
    std::vector<SymbolExpr> polys{SymbolExpr::monomial({1, 0}), SymbolExpr::monomial({0, 1}),
                                  SymbolExpr::monomial({1, 1}), SymbolExpr::monomial({0, 2}),
                                  SymbolExpr::monomial({2, 0}, cplx(0, 1))};
    auto u = coherent(kAx, -0.4, 0.3);
    for (const auto& a : polys)
        for (const auto& b : polys) {
            auto lhs = apply_quantized(weyl_product_expand(a, b, 3), 0.5, u);
            auto rhs = apply_quantized(a, 0.5, apply_quantized(b, 0.5, u));
            CHECK(rel(lhs, rhs) < 1e-4);
        }
}

TEST_CASE("kn_to_weyl of x xi") {
    auto a = SymbolExpr::monomial({1, 1});
    auto b = kn_to_weyl(a, 2);
    CHECK(b.eval({2.0, 3.0}) == cplx(6.0, 0.5));
    auto u = coherent(kAx, 0.5, 0.5);
    CHECK(rel(apply_quantized(b, 0.5, u), apply_quantized(a, 1.0, u)) < 1e-6);
    auto xonly = SymbolExpr::gaussian({0.0, 0.3}, {0.0, 1.0});
    CHECK(symbol_to_json(kn_to_weyl(xonly, 3)) == symbol_to_json(xonly));
}

TEST_CASE("kn_to_weyl truncation error shrinks with N") {
    auto a = SymbolExpr::bump({0.5, 0.3}, 1.0, 8);
    double h = 0.1;
    AxisSpec ax(24.0, 1024);
    auto u = coherent(ax, 5.0, 3.0);
    auto ref = apply_quantized(dilate(a, h), 1.0, u);
    std::vector<double> err;
    for (int N = 1; N <= 3; ++N) err.push_back(rel(apply_quantized(kn_to_weyl(a, N, h), 0.5, u), ref));
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
}

TEST_CASE("property: residual of a truncated product decays like h^{2N}") {
    // Gaussian symbols have exact derivatives of every order.
    auto a = SymbolExpr::gaussian({0.3, 0.0}, {1.0, 1.0});
    auto b = SymbolExpr::gaussian({0.0, 0.2}, {0.5, 1.0}) * SymbolExpr::monomial({1, 0});
    AxisSpec ax(40.0, 2048);
    auto u = coherent(ax, 1.0, 0.5);
    const int N = 2;
    std::vector<double> hs{0.3, 0.2, 0.12}, res;
    for (double h : hs) {
        auto comp = apply_quantized(dilate(a, h), 0.5, apply_quantized(dilate(b, h), 0.5, u));
        auto trunc = apply_quantized(weyl_product_expand(a, b, N, h), 0.5, u);
        res.push_back(rel(trunc, comp) * l2_norm(comp));
    }
    double slope = std::log(res[2] / res[0]) / std::log(hs[2] / hs[0]);
    CHECK(slope > 2 * N - 0.5);
}
