#include "wfg/grid.hpp"

#include <algorithm>
#include <cmath>

#include "wfg/fft.hpp"

namespace wfg {

AxisSpec::AxisSpec(double L_, int n_, int d_) : L(L_), n(n_), d(d_) { validate(); }

AxisSpec AxisSpec::balanced(int n, int d) { return AxisSpec(std::sqrt(kPi * n / 2.0), n, d); }

void AxisSpec::validate() const {
    if (!(L > 0.0) || !std::isfinite(L)) throw GridError("axis: L must be positive");
    if (n < 16 || (n & (n - 1)) != 0) throw GridError("axis: n must be a power of two >= 16");
    if (d != 1 && d != 2) throw GridError("axis: d must be 1 or 2");
}

std::size_t AxisSpec::size() const {
    return d == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
}

SampledSignal::SampledSignal(const AxisSpec& a, CVec v, std::string lbl)
    : axis(a), values(std::move(v)), label(std::move(lbl)) {
    if (values.size() != axis.size()) throw InvalidSignal("signal: sample count does not match axis");
    refresh();
}

void SampledSignal::refresh() {
    double b = 0.0;
    const int n = axis.n;
    if (axis.d == 1) {
        if (!values.empty()) b = std::max(std::abs(values.front()), std::abs(values.back()));
    } else {
        for (int i = 0; i < n; ++i) {
            b = std::max({b, std::abs(values[i]), std::abs(values[(n - 1) * n + i]),
                          std::abs(values[i * n]), std::abs(values[i * n + n - 1])});
        }
    }
    boundary_mass = b;
}

double SampledSignal::max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

Direction::Direction(std::vector<double> v) : w(std::move(v)) {
    double s = 0.0;
    for (double c : w) s += c * c;
    if (w.empty() || std::abs(std::sqrt(s) - 1.0) > 1e-12) throw ConfigError("direction is not a unit vector");
}

Direction Direction::normalized(std::vector<double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    s = std::sqrt(s);
    if (!(s > 0.0)) throw ConfigError("direction: zero vector");
    for (double& c : v) c /= s;
    return Direction(std::move(v));
}

Direction Direction::from_degrees(double deg) {
    const double a = deg * kPi / 180.0;
    return Direction::normalized({std::cos(a), std::sin(a)});
}

double Direction::angle() const {
    if (w.size() != 2) throw GridError("direction angle is defined for d = 1 only");
    return std::atan2(w[1], w[0]);
}

double Direction::degrees() const { return angle() * 180.0 / kPi; }

std::vector<Direction> uniform_directions(int count) {
    std::vector<Direction> out;
    for (int j = 0; j < count; ++j) {
        const double a = 2.0 * kPi * j / count;
        out.push_back(Direction::normalized({std::cos(a), std::sin(a)}));
    }
    return out;
}

double angle_between(const std::vector<double>& a, const std::vector<double>& b) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    const double c = ab / std::sqrt(aa * bb);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

double angular_distance(double a, double b) {
    double d = std::fmod(a - b + kPi, 2.0 * kPi);
    if (d < 0) d += 2.0 * kPi;
    return std::abs(d - kPi);
}

void ConicRegion::add(const Direction& w, double theta) {
    if (!(theta > 0.0 && theta < kPi / 2)) throw ConfigError("cone half-angle must lie in (0, pi/2)");
    cones.push_back({w, theta});
}

bool ConicRegion::contains(const std::vector<double>& z) const {
    for (const auto& c : cones)
        if (angle_between(z, c.w.w) <= c.theta) return true;
    return false;
}

const char* to_string(DecayClass c) {
    switch (c) {
        case DecayClass::RAPID: return "RAPID";
        case DecayClass::SLOW: return "SLOW";
        default: return "INDETERMINATE";
    }
}

DecayClass decay_class_from_string(const std::string& s) {
    if (s == "RAPID") return DecayClass::RAPID;
    if (s == "SLOW") return DecayClass::SLOW;
    if (s == "INDETERMINATE") return DecayClass::INDETERMINATE;
    throw ConfigError("unknown decay class '" + s + "'");
}

double l2_norm(const SampledSignal& u) {
    double s = 0.0;
    for (const auto& v : u.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InvalidSignal("l2_norm: non-finite sample");
        s += std::norm(v);
    }
    return std::sqrt(s * std::pow(u.axis.dx(), u.axis.d));
}

cplx inner(const SampledSignal& u, const SampledSignal& v) {
    if (!(u.axis == v.axis)) throw GridError("inner: axis mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) s += u.values[i] * std::conj(v.values[i]);
    return s * std::pow(u.axis.dx(), u.axis.d);
}

namespace {

// Angular wavenumber of raw DFT bin k on a grid with spacing dx.
double wavenumber(int k, int n, double dx) {
    const int ks = k < n / 2 ? k : k - n;
    return 2.0 * kPi * ks / (n * dx);
}

}  // namespace

SeminormResult schwartz_seminorm(const SampledSignal& u, int m, int k) {
    if (m < 0 || k < 0) throw ConfigError("schwartz_seminorm: m, k must be >= 0");
    for (const auto& v : u.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InvalidSignal("schwartz_seminorm: non-finite sample");
    const AxisSpec& ax = u.axis;
    const int n = ax.n;
    const double dx = ax.dx();
    SeminormResult res;
    res.alias_warning = u.aliased();

    auto weighted_sup = [&](const CVec& f) {
        double s = 0.0;
        for (std::size_t idx = 0; idx < f.size(); ++idx) {
            double r2;
            if (ax.d == 1) {
                const double y = ax.x(static_cast<int>(idx));
                r2 = y * y;
            } else {
                const double y0 = ax.x(static_cast<int>(idx / n)), y1 = ax.x(static_cast<int>(idx % n));
                r2 = y0 * y0 + y1 * y1;
            }
            s = std::max(s, std::pow(1.0 + r2, 0.5 * k) * std::abs(f[idx]));
        }
        return s;
    };

    if (m == 0) {
        res.value = weighted_sup(u.values);
        return res;
    }
    CVec F(u.values.size());
    if (ax.d == 1) dft(u.values.data(), F.data(), n, -1);
    else dft2(u.values.data(), F.data(), n, n, -1);

    CVec g(F.size());
    double total = 0.0;
    for (int a0 = 0; a0 <= m; ++a0) {
        for (int a1 = 0; a1 <= (ax.d == 2 ? m - a0 : 0); ++a1) {
            if (ax.d == 1 && a0 == 0) {
                total += weighted_sup(u.values);
                continue;
            }
            if (ax.d == 2 && a0 == 0 && a1 == 0) {
                total += weighted_sup(u.values);
                continue;
            }
            for (std::size_t idx = 0; idx < F.size(); ++idx) {
                cplx mult = 1.0;
                if (ax.d == 1) {
                    const int kk = static_cast<int>(idx);
                    if (kk == n / 2 && a0 % 2 == 1) mult = 0.0;
                    else mult = std::pow(cplx(0.0, wavenumber(kk, n, dx)), a0);
                } else {
                    const int k0 = static_cast<int>(idx / n), k1 = static_cast<int>(idx % n);
                    if ((k0 == n / 2 && a0 % 2 == 1) || (k1 == n / 2 && a1 % 2 == 1)) mult = 0.0;
                    else mult = std::pow(cplx(0.0, wavenumber(k0, n, dx)), a0) *
                                std::pow(cplx(0.0, wavenumber(k1, n, dx)), a1);
                }
                g[idx] = F[idx] * mult;
            }
            if (ax.d == 1) dft(g.data(), g.data(), n, +1);
            else dft2(g.data(), g.data(), n, n, +1);
            const double norm = 1.0 / static_cast<double>(F.size());
            for (auto& v : g) v *= norm;
            total += weighted_sup(g);
        }
    }
    res.value = total;
    return res;
}

std::vector<double> geometric_radii(double r_min, double rho, double r_max) {
    if (!(r_min > 0.0) || !(rho > 1.0)) throw ConfigError("shells: need r_min > 0 and rho > 1");
    std::vector<double> r;
    double cur = r_min;
    while (cur * rho <= r_max * (1.0 + 1e-12)) {
        r.push_back(cur);
        cur *= rho;
    }
    return r;
}

double shell_outer(const std::vector<double>& radii, std::size_t i) {
    if (i + 1 < radii.size()) return radii[i + 1];
    if (radii.size() >= 2) return radii[i] * radii[i] / radii[i - 1];
    return radii[i] * 1.25;
}

}  // namespace wfg
