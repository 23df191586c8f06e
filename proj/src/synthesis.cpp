#include "wfg/synthesis.hpp"

#include <algorithm>
#include <cmath>

namespace wfg {

namespace {

void check_dim(const std::vector<double>& v, const AxisSpec& ax, const char* what) {
    if (static_cast<int>(v.size()) != ax.d)
        throw ConfigError(std::string(what) + ": vector length must equal the grid dimension");
}

// Evaluates f(x) over the grid (d = 1 or 2) where f takes a point of size d.
template <class F>
CVec tabulate(const AxisSpec& ax, F f) {
    CVec v(ax.size());
    if (ax.d == 1) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < ax.n; ++j) v[j] = f(std::array<double, 2>{ax.x(j), 0.0});
    } else {
#pragma omp parallel for schedule(static)
        for (int a = 0; a < ax.n; ++a)
            for (int b = 0; b < ax.n; ++b) v[a * ax.n + b] = f(std::array<double, 2>{ax.x(a), ax.x(b)});
    }
    return v;
}

// A unit-width Gaussian centred this far inside the box is below 1e-16 at the edge.
constexpr double kTermMargin = 8.6;

// Whether the phase-space centre (c, k^2 eta) of a term can be sampled without truncation or aliasing.
bool term_fits(const std::vector<double>& w, double k2, const AxisSpec& ax) {
    for (int i = 0; i < ax.d; ++i)
        if (std::abs(k2 * w[i]) + kTermMargin > ax.L || std::abs(k2 * w[ax.d + i]) + kTermMargin > ax.xi_max())
            return false;
    return true;
}

}  // namespace

void PrescribedSpec::validate() const {
    axis.validate();
    if (J_max < 1) throw ConfigError("prescribed: J_max must be >= 1");
    if (K_max < 2) throw ConfigError("prescribed: K_max must be >= 2");
    for (const auto& w : directions) {
        if (static_cast<int>(w.w.size()) != 2 * axis.d) throw ConfigError("prescribed: direction has wrong length");
        double s = 0;
        for (double c : w.w) s += c * c;
        if (std::abs(s - 1.0) > 1e-9) throw ConfigError("prescribed: directions must be unit vectors");
    }
}

int prescribed_K_for(double r_max) {
    int K = 2;
    while (K * K < 1.25 * r_max || 0.8 * (K - 1.0) * (K - 1.0) < r_max) ++K;
    return K;
}

SampledSignal synth_fk(const std::vector<double>& y, const std::vector<double>& eta, int k, const AxisSpec& axis) {
    axis.validate();
    check_dim(y, axis, "synth_fk");
    check_dim(eta, axis, "synth_fk");
    if (k < 1) throw ConfigError("synth_fk: k must be >= 1");
    double ny = 0, ne = 0;
    for (int i = 0; i < axis.d; ++i) ny += y[i] * y[i], ne += eta[i] * eta[i];
    if (ny == 0 && ne == 0) throw ConfigError("synth_fk: (y, eta) must be nonzero");
    const double k2 = double(k) * k;
    if (k2 * std::sqrt(ny) + 5.0 > axis.L) throw OutOfBox("synth_fk: center k^2 y escapes the box");
    const int d = axis.d;
    SampledSignal u(axis, tabulate(axis, [&](const std::array<double, 2>& x) {
        double r2 = 0, ph = 0;
        for (int i = 0; i < d; ++i) {
            r2 += (x[i] - k2 * y[i]) * (x[i] - k2 * y[i]);
            ph += k2 * x[i] * eta[i];
        }
        return std::polar(std::exp(-0.5 * r2), ph);
    }), "f_" + std::to_string(k));
    return u;
}

SampledSignal synth_prescribed(const PrescribedSpec& spec) {
    spec.validate();
    const AxisSpec& ax = spec.axis;
    const int d = ax.d;
    CVec acc(ax.size(), 0.0);
    const int J = std::min<int>(spec.J_max, spec.directions.size());
    int K_kept = spec.K_max, dropped = 0;
    for (int j = 0; j < J; ++j) {
        const auto& w = spec.directions[j].w;
        const double wt = std::ldexp(1.0, -j);
        for (int k = 1; k <= spec.K_max; ++k) {
            const double k2 = double(k) * k;
            if (!term_fits(w, k2, ax)) {
                K_kept = std::min(K_kept, k - 1);
                ++dropped;
                continue;
            }
            std::vector<double> c(w.begin(), w.begin() + d);
            for (auto& ci : c) ci *= k2;
            CVec t = tabulate(ax, [&](const std::array<double, 2>& x) {
                double r2 = 0, ph = 0;
                for (int i = 0; i < d; ++i) {
                    r2 += (x[i] - c[i]) * (x[i] - c[i]);
                    ph += k2 * x[i] * w[d + i];
                }
                return std::polar(wt * std::exp(-0.5 * r2), ph);
            });
            for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += t[q];
        }
    }
    if (J > 0 && K_kept < 2)
        throw OutOfBox("prescribed: the k = 2 term of some direction does not fit the grid");
    SampledSignal u(ax, std::move(acc), "prescribed");
    u.meta["J_max"] = J;
    u.meta["K_max"] = spec.K_max;
    u.meta["K_kept"] = K_kept;
    u.meta["valid_radius"] = spec.directions.empty() ? 0.0 : 0.8 * (K_kept - 1.0) * (K_kept - 1.0);
    if (spec.directions.empty()) u.warnings.push_back("prescribed: empty direction list, signal is zero");
    if (dropped > 0)
        u.warnings.push_back("prescribed: " + std::to_string(dropped) +
                             " term(s) centred outside the grid dropped, valid_radius lowered to " +
                             std::to_string(u.meta["valid_radius"]));
    return u;
}

SampledSignal coherent_state(const CoherentStateSpec& spec, const AxisSpec& axis) {
    axis.validate();
    check_dim(spec.x0, axis, "coherent_state");
    check_dim(spec.xi0, axis, "coherent_state");
    if (!(spec.h > 0 && spec.h <= 1)) throw ConfigError("coherent_state: h must lie in (0, 1]");
    const int d = axis.d;
    for (int i = 0; i < d; ++i)
        if (std::abs(spec.x0[i] / spec.h) + 5.0 > axis.L) throw OutOfBox("coherent_state: center x0/h escapes the box");
    SampledSignal u(axis, tabulate(axis, [&](const std::array<double, 2>& x) {
        double r2 = 0, ph = 0;
        for (int i = 0; i < d; ++i) {
            const double c = spec.x0[i] / spec.h;
            r2 += (x[i] - c) * (x[i] - c);
            ph += x[i] * spec.xi0[i] / spec.h;
        }
        return std::polar(std::exp(-0.5 * r2), ph);
    }), "coherent");
    return u;
}

SignalKind signal_kind_from_string(const std::string& s) {
    if (s == "GAUSSIAN" || s == "gauss") return SignalKind::GAUSSIAN;
    if (s == "HERMITE" || s == "hermite") return SignalKind::HERMITE;
    if (s == "CHIRP" || s == "chirp") return SignalKind::CHIRP;
    if (s == "PLANE_WAVE" || s == "plane") return SignalKind::PLANE_WAVE;
    if (s == "NARROW_GAUSS" || s == "narrow") return SignalKind::NARROW_GAUSS;
    if (s == "PRESCRIBED" || s == "prescribed") return SignalKind::PRESCRIBED;
    throw ConfigError("unknown signal kind '" + s + "'");
}

const char* to_string(SignalKind k) {
    switch (k) {
        case SignalKind::GAUSSIAN: return "GAUSSIAN";
        case SignalKind::HERMITE: return "HERMITE";
        case SignalKind::CHIRP: return "CHIRP";
        case SignalKind::PLANE_WAVE: return "PLANE_WAVE";
        case SignalKind::NARROW_GAUSS: return "NARROW_GAUSS";
        default: return "PRESCRIBED";
    }
}

namespace {
double param(const std::map<std::string, double>& p, const char* key, double dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : it->second;
}
}  // namespace

SampledSignal standard_signal(SignalKind kind, const std::map<std::string, double>& params, const AxisSpec& axis) {
    axis.validate();
    if (axis.d != 1) throw ConfigError("standard_signal: only d = 1 is supported");
    const int n = axis.n;
    CVec v(n);
    std::string label;
    switch (kind) {
        case SignalKind::GAUSSIAN:
            for (int j = 0; j < n; ++j) v[j] = std::pow(kPi, -0.25) * std::exp(-0.5 * axis.x(j) * axis.x(j));
            label = "gauss";
            break;
        case SignalKind::HERMITE: {
            const int order = static_cast<int>(param(params, "n", 3));
            if (order < 0) throw ConfigError("HERMITE: n must be >= 0");
            for (int j = 0; j < n; ++j) {
                const double x = axis.x(j);
                double p0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x), p1 = std::sqrt(2.0) * x * p0;
                if (order == 0) p1 = p0;
                for (int m = 1; m < order; ++m) {
                    const double p2 = std::sqrt(2.0 / (m + 1)) * x * p1 - std::sqrt(double(m) / (m + 1)) * p0;
                    p0 = p1;
                    p1 = p2;
                }
                v[j] = p1;
            }
            label = "herm" + std::to_string(order);
            break;
        }
        case SignalKind::CHIRP: {
            const double c = param(params, "c", 1.0);
            for (int j = 0; j < n; ++j) v[j] = std::polar(1.0, 0.5 * c * axis.x(j) * axis.x(j));
            label = "chirp";
            break;
        }
        case SignalKind::PLANE_WAVE: {
            const double xi0 = param(params, "xi0", 0.0);
            for (int j = 0; j < n; ++j) v[j] = std::polar(1.0, xi0 * axis.x(j));
            label = "plane";
            break;
        }
        case SignalKind::NARROW_GAUSS: {
            const double s = param(params, "sigma", 4.0 * axis.dx());
            if (!(s > 0)) throw ConfigError("NARROW_GAUSS: sigma must be positive");
            for (int j = 0; j < n; ++j)
                v[j] = std::exp(-0.5 * axis.x(j) * axis.x(j) / (s * s)) / std::sqrt(2 * kPi * s * s);
            label = "narrow";
            break;
        }
        default:
            throw ConfigError("standard_signal: use synth_prescribed for PRESCRIBED");
    }
    SampledSignal u(axis, std::move(v), label);
    if (kind == SignalKind::CHIRP || kind == SignalKind::PLANE_WAVE)
        u.warnings.push_back(label + ": non-decaying, truncated at the box edge (boundary_mass " +
                             std::to_string(u.boundary_mass) + ")");
    return u;
}

std::vector<CorpusEntry> corpus(const AxisSpec& axis, double r_max, double presc_deg) {
    std::vector<CorpusEntry> out;
    out.push_back({"gauss", standard_signal(SignalKind::GAUSSIAN, {}, axis), true});
    out.push_back({"herm3", standard_signal(SignalKind::HERMITE, {{"n", 3}}, axis), true});
    out.push_back({"chirp", standard_signal(SignalKind::CHIRP, {{"c", 1}}, axis), false});
    out.push_back({"plane", standard_signal(SignalKind::PLANE_WAVE, {{"xi0", 0}}, axis), false});
    out.push_back({"narrow", standard_signal(SignalKind::NARROW_GAUSS, {}, axis), true});
    PrescribedSpec ps;
    ps.axis = axis;
    ps.directions = {Direction::from_degrees(presc_deg)};
    ps.J_max = 1;
    ps.K_max = prescribed_K_for(r_max);
    auto u = synth_prescribed(ps);
    u.label = "presc";
    out.push_back({"presc", u, true});
    for (auto& e : out) e.u.label = e.name;
    return out;
}

}  // namespace wfg
