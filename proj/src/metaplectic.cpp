#include "wfg/metaplectic.hpp"

#include <cmath>

#include "wfg/transforms.hpp"

namespace wfg {

Mat2 generator_matrix(const Generator& g) {
    switch (g.kind) {
        case GenKind::FOURIER: return {0, 1, -1, 0};
        case GenKind::CHIRP: return {1, 0, g.param, 1};
        default: return {g.param, 0, 0, 1.0 / g.param};
    }
}

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 SymplecticWord::matrix() const {
    Mat2 m{1, 0, 0, 1};
    for (const auto& g : gens) m = mat_mul(generator_matrix(g), m);
    return m;
}

std::array<double, 2> SymplecticWord::map(const std::array<double, 2>& z) const {
    const Mat2 m = matrix();
    return {m[0] * z[0] + m[1] * z[1], m[2] * z[0] + m[3] * z[1]};
}

double symplectic_defect(const Mat2& m) {
    // J = [[0, 1], [-1, 0]]; m^T J m = det(m) J for 2 x 2.
    const double det = m[0] * m[3] - m[1] * m[2];
    return std::abs(det - 1.0);
}

namespace {

SampledSignal apply_one(const Generator& g, const SampledSignal& u, DilatePolicy policy) {
    const AxisSpec& ax = u.axis;
    if (ax.d != 1) throw GridError("metaplectic: only d = 1 is supported");
    switch (g.kind) {
        case GenKind::FOURIER: {
            SampledSignal v = fourier(u);
            for (auto& c : v.values) c /= std::sqrt(2.0 * kPi);
            v.label = u.label;
            v.refresh();
            return v;
        }
        case GenKind::CHIRP: {
            if (std::abs(g.param) * ax.L > 0.8 * ax.xi_max())
                throw GridError("chirp: |c| L exceeds 0.8 xi_max, the chirped signal would alias");
            SampledSignal v = u;
            for (int j = 0; j < ax.n; ++j) v.values[j] *= std::polar(1.0, 0.5 * g.param * ax.x(j) * ax.x(j));
            v.refresh();
            return v;
        }
        default: {
            const double lam = g.param;
            if (!(lam > 0)) throw ConfigError("dilate: lambda must be positive");
            if (policy == DilatePolicy::RESCALE_AXIS) {
                SampledSignal v = u;
                v.axis = AxisSpec(ax.L * lam, ax.n, 1);
                for (auto& c : v.values) c /= std::sqrt(lam);
                v.refresh();
                return v;
            }
            // The image must fit: mass outside |x| < L / lambda (lambda > 1) or
            // spectral mass beyond lambda xi_max (lambda < 1) is lost.
            const double tot = std::pow(l2_norm(u), 2);
            double lost = 0.0;
            if (lam > 1) {
                for (int j = 0; j < ax.n; ++j)
                    if (std::abs(ax.x(j)) > ax.L / lam) lost += std::norm(u.values[j]) * ax.dx();
            } else if (lam < 1) {
                const SampledSignal uh = fourier(u);
                for (int k = 0; k < ax.n; ++k)
                    if (std::abs(ax.xi(k)) > lam * ax.xi_max()) lost += std::norm(uh.values[k]) * ax.dxi() / (2 * kPi);
            }
            if (lost > 1e-12 * tot) throw GridError("dilate: dilated signal does not fit the grid");
            std::vector<double> pts(ax.n);
            for (int j = 0; j < ax.n; ++j) pts[j] = ax.x(j) / lam;
            CVec v = bandlimited_eval(u, pts);
            for (auto& c : v) c /= std::sqrt(lam);
            return SampledSignal(ax, std::move(v), u.label);
        }
    }
}

}  // namespace

SampledSignal apply_unitary(const SymplecticWord& word, const SampledSignal& u, DilatePolicy policy) {
    SampledSignal v = u;
    for (const auto& g : word.gens) v = apply_one(g, v, policy);
    return v;
}

ConicRegion map_region(const SymplecticWord& word, const ConicRegion& g) {
    const Mat2 m = word.matrix();
    auto img = [&](double a) {
        const double x = std::cos(a), y = std::sin(a);
        return std::atan2(m[2] * x + m[3] * y, m[0] * x + m[1] * y);
    };
    ConicRegion out;
    for (const auto& c : g.cones) {
        const double a = c.w.angle();
        const double na = img(a);
        // Linear maps preserve the order of rays, so the boundary images bound the cone.
        const double th = std::max(angular_distance(na, img(a - c.theta)), angular_distance(na, img(a + c.theta)));
        out.add(Direction::from_degrees(na * 180.0 / kPi), th);
    }
    return out;
}

SymplecticWord word_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("word: expected an array of generators");
    SymplecticWord w;
    for (const auto& e : j) {
        if (e.is_string() && e.get<std::string>() == "fourier") {
            w.gens.push_back({GenKind::FOURIER, 0.0});
        } else if (e.is_object() && e.size() == 1 && e.contains("chirp") && e["chirp"].is_number()) {
            w.gens.push_back({GenKind::CHIRP, e["chirp"].get<double>()});
        } else if (e.is_object() && e.size() == 1 && e.contains("dilate") && e["dilate"].is_number()) {
            const double l = e["dilate"].get<double>();
            if (!(l > 0)) throw ConfigError("word: dilate factor must be positive");
            w.gens.push_back({GenKind::DILATE, l});
        } else {
            throw ConfigError("word: unknown generator " + e.dump());
        }
    }
    return w;
}

nlohmann::json word_to_json(const SymplecticWord& w) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& g : w.gens) {
        if (g.kind == GenKind::FOURIER) j.push_back("fourier");
        else if (g.kind == GenKind::CHIRP) j.push_back({{"chirp", g.param}});
        else j.push_back({{"dilate", g.param}});
    }
    return j;
}

}  // namespace wfg
