#include "doctest.h"

#include <cmath>

#include "wfg/synthesis.hpp"
#include "wfg/transforms.hpp"

using namespace wfg;

namespace {

double max_err_fk_stft(const std::vector<double>& y, const std::vector<double>& eta, int k, const AxisSpec& ax) {
    const SampledSignal f = synth_fk(y, eta, k, ax);
    const PhaseField V = stft(f, GaussWindow{WindowNorm::PEAK_UNIT}, {});
    const double k2 = k * k;
    double err = 0;
    for (std::size_t i = 0; i < V.xs.size(); ++i)
        for (std::size_t j = 0; j < V.xis.size(); ++j) {
            const double dx = V.xs[i] - k2 * y[0], dxi = V.xis[j] - k2 * eta[0];
            err = std::max(err, std::abs(std::abs(V.at(i, j)) - std::exp(-(dx * dx + dxi * dxi) / 4)));
        }
    return err;
}

}  // namespace

TEST_CASE("synth_fk closed forms") {
    const AxisSpec ax(20.0, 512);
    const auto a = synth_fk({1.0}, {0.0}, 1, ax);
    const auto b = synth_fk({0.0}, {1.0}, 2, ax);
    for (int j = 0; j < ax.n; j += 37) {
        const double x = ax.x(j);
        CHECK(std::abs(a.values[j] - std::exp(-(x - 1) * (x - 1) / 2)) < 1e-15);
        CHECK(std::abs(b.values[j] - std::exp(-x * x / 2) * std::exp(cplx(0, 4 * x))) < 1e-14);
    }
    CHECK_THROWS_AS(synth_fk({1.0}, {0.0}, 5, ax), OutOfBox);
    CHECK_THROWS_AS(synth_fk({0.0}, {0.0}, 1, ax), ConfigError);
}

TEST_CASE("stft modulus of f_k matches the closed form") {
    const AxisSpec ax(40.0, 2048);
    const double s = 1 / std::sqrt(2.0);
    for (int k = 1; k <= 3; ++k) CHECK(max_err_fk_stft({s}, {s}, k, ax) < 1e-6);
}

TEST_CASE("prescribed signal with one direction is the sum of its f_k") {
    const AxisSpec ax(40.0, 1024);
    PrescribedSpec sp;
    sp.directions = {Direction::from_degrees(0)};
    sp.K_max = 4;
    sp.axis = ax;
    const auto u = synth_prescribed(sp);
    CHECK(u.meta.at("K_max") == 4);
    CHECK(u.meta.at("valid_radius") == doctest::Approx(0.8 * 9));
    CVec sum(ax.n, 0.0);
    for (int k = 1; k <= 4; ++k) {
        const auto f = synth_fk({1.0}, {0.0}, k, ax);
        for (int j = 0; j < ax.n; ++j) sum[j] += f.values[j];
    }
    double err = 0;
    for (int j = 0; j < ax.n; ++j) err = std::max(err, std::abs(sum[j] - u.values[j]));
    CHECK(err < 1e-14);
}

TEST_CASE("prescribed stft peaks at (k^2, 0) with unit height") {
    const AxisSpec ax(40.0, 1024);
    PrescribedSpec sp;
    sp.directions = {Direction::from_degrees(0)};
    sp.K_max = 4;
    sp.axis = ax;
    const auto V = stft(synth_prescribed(sp), GaussWindow{WindowNorm::PEAK_UNIT}, {});
    const std::vector<std::array<double, 2>> pts{{1, 0}, {4, 0}, {9, 0}, {16, 0}};
    const CVec at = stft_at(synth_prescribed(sp), GaussWindow{WindowNorm::PEAK_UNIT}, pts);
    // From k = 3 on, neighbouring peaks are >= 5 apart: overlap below e^{-25/4}.
    for (std::size_t q = 2; q < pts.size(); ++q) CHECK(std::abs(at[q]) == doctest::Approx(1.0).epsilon(3e-3));
    // k = 1 and k = 2 are 3 apart and overlap by e^{-9/4}.
    CHECK(std::abs(at[0]) == doctest::Approx(1.0).epsilon(0.12));
    CHECK(V.l2_norm() > 0);
}

TEST_CASE("empty direction list gives the zero signal") {
    PrescribedSpec sp;
    sp.axis = AxisSpec(20.0, 256);
    const auto u = synth_prescribed(sp);
    CHECK(u.max_abs() == 0.0);
    CHECK_FALSE(u.warnings.empty());
}

TEST_CASE("K rule covers both the shell reach and the valid radius") {
    for (double r : {10.0, 32.0, 45.4}) {
        const int K = prescribed_K_for(r);
        CHECK(K * K >= 1.25 * r);
        CHECK(0.8 * (K - 1.0) * (K - 1.0) >= r);
        CHECK(0.8 * (K - 2.0) * (K - 2.0) < r);
    }
}

TEST_CASE("coherent states") {
    const AxisSpec ax(30.0, 1024);
    const auto g = coherent_state({{0.0}, {0.0}, 0.3}, ax);
    for (int j = 0; j < ax.n; j += 41) CHECK(std::abs(g.values[j] - std::exp(-ax.x(j) * ax.x(j) / 2)) < 1e-15);
    for (auto [x0, xi0, h] : {std::tuple{1.0, -2.0, 0.5}, {0.5, 0.5, 0.1}, {-2.0, 1.0, 1.0}}) {
        const auto c = coherent_state({{x0}, {xi0}, h}, ax);
        CHECK(l2_norm(c) == doctest::Approx(std::pow(kPi, 0.25)).epsilon(1e-8));
        const auto V = stft(c, GaussWindow{}, {});
        std::size_t bi = 0, bk = 0;
        for (std::size_t i = 0; i < V.xs.size(); ++i)
            for (std::size_t k = 0; k < V.xis.size(); ++k)
                if (std::abs(V.at(i, k)) > std::abs(V.at(bi, bk))) bi = i, bk = k;
        CHECK(std::abs(V.xs[bi] - x0 / h) <= V.dx());
        CHECK(std::abs(V.xis[bk] - xi0 / h) <= V.dxi());
    }
    CHECK_THROWS_AS(coherent_state({{3.0}, {0.0}, 0.1}, ax), OutOfBox);
}

TEST_CASE("standard signals") {
    const AxisSpec ax = AxisSpec::balanced(1024);
    CHECK(l2_norm(standard_signal(SignalKind::GAUSSIAN, {}, ax)) == doctest::Approx(1.0));
    for (int n : {0, 1, 3, 6})
        CHECK(l2_norm(standard_signal(SignalKind::HERMITE, {{"n", n}}, ax)) == doctest::Approx(1.0));
    const auto h3 = standard_signal(SignalKind::HERMITE, {{"n", 3}}, ax);
    const auto h1 = standard_signal(SignalKind::HERMITE, {{"n", 1}}, ax);
    CHECK(std::abs(inner(h3, h1)) < 1e-12);
    const auto ch = standard_signal(SignalKind::CHIRP, {{"c", 1.0}}, ax);
    CHECK(ch.boundary_mass > 0.5);
    CHECK_FALSE(ch.warnings.empty());
    CHECK(standard_signal(SignalKind::PLANE_WAVE, {{"xi0", 0.0}}, ax).boundary_mass == doctest::Approx(1.0));
    CHECK_THROWS_AS(signal_kind_from_string("SQUARE"), ConfigError);
    for (auto k : {SignalKind::GAUSSIAN, SignalKind::CHIRP, SignalKind::NARROW_GAUSS})
        CHECK(signal_kind_from_string(to_string(k)) == k);
}

TEST_CASE("corpus has six signals, two of them non-decaying") {
    const AxisSpec ax = AxisSpec::balanced(1024);
    const auto c = corpus(ax, 30.0);
    REQUIRE(c.size() == 6);
    int nd = 0;
    for (const auto& e : c) nd += e.decaying ? 0 : 1;
    CHECK(nd == 2);
}

TEST_CASE("prescribed terms outside the box are dropped and lower the valid radius") {
    const AxisSpec ax = AxisSpec::balanced(1024);  // L ~ 40.1
    PrescribedSpec sp;
    sp.directions = {Direction::from_degrees(90)};
    sp.K_max = 8;
    sp.axis = ax;
    const auto u = synth_prescribed(sp);
    // k^2 + 8.6 <= 40.1 keeps k <= 5; larger k would alias in xi.
    CHECK(u.meta.at("K_kept") == 5);
    CHECK(u.meta.at("valid_radius") == doctest::Approx(0.8 * 16));
    CHECK_FALSE(u.warnings.empty());
    sp.K_max = 5;
    const auto v = synth_prescribed(sp);
    CHECK(v.warnings.empty());
    double err = 0;
    for (int j = 0; j < ax.n; ++j) err = std::max(err, std::abs(u.values[j] - v.values[j]));
    CHECK(err == 0.0);
    sp.axis = AxisSpec(8.0, 256);
    CHECK_THROWS_AS(synth_prescribed(sp), OutOfBox);
}
