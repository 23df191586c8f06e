#include "wfg/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "wfg/fft.hpp"

namespace wfg {

namespace {

double sign_pow(long k) { return (k % 2 == 0) ? 1.0 : -1.0; }

void require_1d(const AxisSpec& a, const char* what) {
    if (a.d != 1) throw GridError(std::string(what) + ": only d = 1 is supported");
}

void alias_check(const SampledSignal& u, std::vector<std::string>& warnings, const char* what) {
    if (u.aliased())
        warnings.push_back(std::string("AliasWarning: ") + what + ": boundary mass " +
                           std::to_string(u.boundary_mass) + " exceeds guard");
}

}  // namespace

double GaussWindow::scale() const {
    switch (norm) {
        case WindowNorm::UNIT_L2: return std::pow(kPi, -0.25 * d);
        case WindowNorm::PEAK_UNIT: return std::pow(kPi, -0.5 * d);
        default: return 1.0;
    }
}

double GaussWindow::operator()(double y) const { return scale() * std::exp(-0.5 * y * y); }

std::string GaussWindow::id() const {
    switch (norm) {
        case WindowNorm::UNIT_L2: return "gauss-unit-l2";
        case WindowNorm::PEAK_UNIT: return "gauss-peak-unit";
        default: return "gauss-plain";
    }
}

double PhaseField::dx() const { return xs.size() > 1 ? xs[1] - xs[0] : 1.0; }
double PhaseField::dxi() const { return xis.size() > 1 ? xis[1] - xis[0] : 1.0; }

double PhaseField::l2_norm() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return std::sqrt(s * dx() * dxi());
}

SampledSignal fourier(const SampledSignal& u) {
    const AxisSpec& ax = u.axis;
    const int n = ax.n;
    SampledSignal out;
    out.axis = ax.dual();
    out.label = u.label.empty() ? "fourier" : "fourier(" + u.label + ")";
    out.values.resize(u.values.size());
    alias_check(u, out.warnings, "fourier");
    if (ax.d == 1) {
        CVec buf(n);
        for (int j = 0; j < n; ++j) buf[j] = u.values[j] * sign_pow(j);
        dft(buf.data(), out.values.data(), n, -1);
        for (int k = 0; k < n; ++k) out.values[k] *= ax.dx() * sign_pow(k - n / 2);
    } else {
        CVec buf(u.values.size());
        for (int j0 = 0; j0 < n; ++j0)
            for (int j1 = 0; j1 < n; ++j1) buf[j0 * n + j1] = u.values[j0 * n + j1] * sign_pow(j0 + j1);
        dft2(buf.data(), out.values.data(), n, n, -1);
        const double s = ax.dx() * ax.dx();
        for (int k0 = 0; k0 < n; ++k0)
            for (int k1 = 0; k1 < n; ++k1) out.values[k0 * n + k1] *= s * sign_pow(k0 + k1 - n);
    }
    out.refresh();
    return out;
}

SampledSignal inverse_fourier(const SampledSignal& uhat, const AxisSpec& target) {
    const AxisSpec dual = target.dual();
    if (uhat.axis.n != dual.n || uhat.axis.d != dual.d || std::abs(uhat.axis.L - dual.L) > 1e-12 * dual.L)
        throw GridError("inverse_fourier: input is not on the dual grid of the target axis");
    const int n = target.n;
    SampledSignal out;
    out.axis = target;
    out.label = uhat.label;
    out.values.resize(uhat.values.size());
    const double c = target.dxi() / (2.0 * kPi);
    if (target.d == 1) {
        CVec buf(n);
        for (int k = 0; k < n; ++k) buf[k] = uhat.values[k] * sign_pow(k - n / 2);
        dft(buf.data(), out.values.data(), n, +1);
        for (int j = 0; j < n; ++j) out.values[j] *= c * sign_pow(j);
    } else {
        CVec buf(uhat.values.size());
        for (int k0 = 0; k0 < n; ++k0)
            for (int k1 = 0; k1 < n; ++k1) buf[k0 * n + k1] = uhat.values[k0 * n + k1] * sign_pow(k0 + k1 - n);
        dft2(buf.data(), out.values.data(), n, n, +1);
        for (int j0 = 0; j0 < n; ++j0)
            for (int j1 = 0; j1 < n; ++j1) out.values[j0 * n + j1] *= c * c * sign_pow(j0 + j1);
    }
    out.refresh();
    return out;
}

namespace {

PhaseField stft_impl(const SampledSignal& u, const GaussWindow& w, const PhaseGridSpec& pg, bool parallel) {
    require_1d(u.axis, "stft");
    if (pg.x_stride < 1 || pg.xi_stride < 1) throw GridError("stft: strides must be >= 1");
    const AxisSpec& ax = u.axis;
    const int n = ax.n;
    const double dx = ax.dx();
    PhaseField F;
    F.axis = ax;
    F.kind = FieldKind::STFT;
    F.window_id = w.id();
    const double step = dx * pg.x_stride;
    const int extra = static_cast<int>(std::ceil(pg.x_margin / step - 1e-12));
    for (int i = -extra; -ax.L + i * step < ax.L + pg.x_margin - 1e-12; ++i) F.xs.push_back(-ax.L + i * step);
    for (int k = 0; k < n; k += pg.xi_stride) F.xis.push_back(ax.xi(k));
    const std::size_t nx = F.xs.size(), nk = F.xis.size();
    F.values.assign(nx * nk, 0.0);

    // Window support is cut at |y - x| <= 40, where it is below 1e-300.
    const double cut = 40.0;
#pragma omp parallel if (parallel)
    {
        CVec buf(n);
#pragma omp for schedule(static)
        for (long i = 0; i < static_cast<long>(nx); ++i) {
            const double x0 = F.xs[i];
            for (int j = 0; j < n; ++j) {
                const double y = ax.x(j) - x0;
                buf[j] = std::abs(y) > cut ? cplx(0.0) : u.values[j] * (w(y) * sign_pow(j));
            }
            dft(buf.data(), buf.data(), n, -1);
            cplx* row = &F.values[i * nk];
            for (std::size_t q = 0; q < nk; ++q) {
                const int k = static_cast<int>(q) * pg.xi_stride;
                row[q] = buf[k] * (dx * sign_pow(k - n / 2));
            }
        }
    }
    return F;
}

}  // namespace

PhaseField stft(const SampledSignal& u, const GaussWindow& w, const PhaseGridSpec& pg) {
    return stft_impl(u, w, pg, true);
}

PhaseField stft_serial(const SampledSignal& u, const GaussWindow& w, const PhaseGridSpec& pg) {
    return stft_impl(u, w, pg, false);
}

CVec stft_at(const SampledSignal& u, const GaussWindow& w, const std::vector<std::array<double, 2>>& pts) {
    require_1d(u.axis, "stft_at");
    const AxisSpec& ax = u.axis;
    const double dx = ax.dx();
    CVec out(pts.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long q = 0; q < static_cast<long>(pts.size()); ++q) {
        const double x0 = pts[q][0], xi0 = pts[q][1];
        const int j0 = std::max(0, static_cast<int>(std::floor((x0 - 40.0 + ax.L) / dx)));
        const int j1 = std::min(ax.n - 1, static_cast<int>(std::ceil((x0 + 40.0 + ax.L) / dx)));
        cplx s = 0.0;
        if (j0 <= j1) {
            const cplx step = std::polar(1.0, -dx * xi0);
            cplx ph = std::polar(1.0, -ax.x(j0) * xi0);
            for (int j = j0; j <= j1; ++j) {
                s += u.values[j] * w(ax.x(j) - x0) * ph;
                ph *= step;
                if ((j - j0) % 64 == 63) ph = std::polar(1.0, -ax.x(j + 1) * xi0);
            }
        }
        out[q] = s * dx;
    }
    return out;
}

CVec bandlimited_eval(const SampledSignal& u, const std::vector<double>& pts) {
    require_1d(u.axis, "bandlimited_eval");
    const AxisSpec& ax = u.axis;
    const int n = ax.n;
    CVec U(n);
    dft(u.values.data(), U.data(), n, -1);
    const double dk = 2.0 * kPi / (n * ax.dx());
    CVec out(pts.size());
#pragma omp parallel for schedule(static)
    for (long q = 0; q < static_cast<long>(pts.size()); ++q) {
        const double x = pts[q];
        if (x < -ax.L - 1e-12 || x > ax.L - ax.dx() + 1e-12) {
            out[q] = 0.0;
            continue;
        }
        const double t = x + ax.L;
        // Bins 0..n/2-1 and -(n/2-1)..-1; the Nyquist bin enters as a cosine.
        cplx s = U[0];
        const cplx step = std::polar(1.0, dk * t);
        cplx ph = step;
        for (int k = 1; k < n / 2; ++k) {
            s += U[k] * ph + U[n - k] * std::conj(ph);
            ph *= step;
            if (k % 64 == 63) ph = std::polar(1.0, dk * t * (k + 1));
        }
        s += U[n / 2] * std::cos(dk * t * (n / 2));
        out[q] = s / static_cast<double>(n);
    }
    return out;
}

SampledSignal resample(const SampledSignal& u, const AxisSpec& target) {
    require_1d(u.axis, "resample");
    std::vector<double> pts(target.n);
    for (int j = 0; j < target.n; ++j) pts[j] = target.x(j);
    SampledSignal out(target, bandlimited_eval(u, pts), u.label);
    out.meta = u.meta;
    return out;
}

PhaseField hstft_from(const PhaseField& V, double h) {
    if (V.kind != FieldKind::STFT) throw KindError("hstft: input field must be an STFT");
    if (V.window_id != GaussWindow{}.id()) throw KindError("hstft: STFT must use the unit-L2 window");
    if (!(h > 0.0 && h <= 1.0)) throw ConfigError("hstft: h must lie in (0, 1]");
    PhaseField T;
    T.axis = V.axis;
    T.kind = FieldKind::HSTFT;
    T.h = h;
    T.window_id = V.window_id;
    for (double x : V.xs) T.xs.push_back(h * x);
    for (double xi : V.xis) T.xis.push_back(h * xi);
    T.values.resize(V.values.size());
    const double c = 1.0 / (std::sqrt(2.0 * kPi) * h);
    const std::size_t nk = V.xis.size();
    for (std::size_t i = 0; i < V.xs.size(); ++i)
        for (std::size_t k = 0; k < nk; ++k)
            T.values[i * nk + k] = c * std::polar(1.0, V.xs[i] * V.xis[k]) * V.values[i * nk + k];
    return T;
}

PhaseField hstft(const SampledSignal& u, double h, const HRegion& region) {
    require_1d(u.axis, "hstft");
    if (!(h > 0.0 && h <= 1.0)) throw ConfigError("hstft: h must lie in (0, 1]");
    const bool full = region.x_max <= 0.0 || region.xi_max <= 0.0;
    SampledSignal src = u;
    PhaseGridSpec pg;
    pg.x_stride = std::max(1, region.x_stride);
    if (!full) {
        const double Xneed = region.x_max / h, Xineed = region.xi_max / h;
        const AxisSpec& ax = u.axis;
        const bool fits = Xneed <= ax.L && Xineed <= ax.xi_max();
        // A truncated signal cannot be extended; inside the box its grid is used as is.
        if ((Xneed + 10.0 > ax.L || Xineed > ax.xi_max()) && !(fits && u.aliased())) {
            // Recompute on the minimal enclosing grid.
            const double L2 = std::max(ax.L, Xneed + 10.0);
            const double ximax2 = std::max(ax.xi_max(), Xineed * 1.05);
            int n2 = ax.n;
            while (kPi * n2 / (2.0 * L2) < ximax2) n2 *= 2;
            if (n2 > (1 << 16)) throw RegionTooLarge(h, "hstft: dilated region needs n > 65536");
            if (u.aliased())
                throw RegionTooLarge(h, "hstft: signal not decayed at the box edge, cannot enlarge grid");
            if (ximax2 > ax.xi_max()) {
                SampledSignal uh = fourier(u);
                const double edge = std::max(std::abs(uh.values[0]), std::abs(uh.values[1]));
                if (edge > kBoundaryEps * uh.max_abs())
                    throw RegionTooLarge(h, "hstft: spectrum not decayed at Nyquist, cannot refine grid");
            }
            src = resample(u, AxisSpec(L2, n2, 1));
        }
    }
    PhaseField V = stft(src, GaussWindow{}, pg);
    if (full) return hstft_from(V, h);
    // Keep only rows and columns inside the requested box.
    PhaseField sub;
    sub.axis = V.axis;
    sub.kind = V.kind;
    sub.window_id = V.window_id;
    std::vector<std::size_t> ri, ci;
    for (std::size_t i = 0; i < V.xs.size(); ++i)
        if (std::abs(V.xs[i] * h) <= region.x_max) ri.push_back(i);
    for (std::size_t k = 0; k < V.xis.size(); ++k)
        if (std::abs(V.xis[k] * h) <= region.xi_max) ci.push_back(k);
    for (auto i : ri) sub.xs.push_back(V.xs[i]);
    for (auto k : ci) sub.xis.push_back(V.xis[k]);
    sub.values.reserve(ri.size() * ci.size());
    for (auto i : ri)
        for (auto k : ci) sub.values.push_back(V.values[i * V.xis.size() + k]);
    return hstft_from(sub, h);
}

namespace {

CVec upsample2(const CVec& f) {
    const int n = static_cast<int>(f.size());
    CVec F(n);
    dft(f.data(), F.data(), n, -1);
    CVec G(2 * n, 0.0);
    for (int k = 0; k < n / 2; ++k) G[k] = F[k];
    for (int k = n / 2 + 1; k < n; ++k) G[k + n] = F[k];
    G[n / 2] = 0.5 * F[n / 2];
    G[n / 2 + n] = 0.5 * F[n / 2];
    dft(G.data(), G.data(), 2 * n, +1);
    for (auto& v : G) v /= static_cast<double>(n);
    return G;
}

}  // namespace

PhaseField wigner(const SampledSignal& f, const SampledSignal& g, int x_stride) {
    require_1d(f.axis, "wigner");
    if (!(f.axis == g.axis)) throw GridError("wigner: axis mismatch");
    const AxisSpec& ax = f.axis;
    const int n = ax.n;
    const CVec F = upsample2(f.values), G = upsample2(g.values);
    PhaseField W;
    W.axis = ax;
    W.kind = FieldKind::WIGNER;
    W.window_id = "none";
    for (int i = 0; i < n; i += x_stride) W.xs.push_back(ax.x(i));
    for (int k = 0; k < n; ++k) W.xis.push_back(ax.xi(k));
    W.values.assign(W.xs.size() * n, 0.0);
    const double dx = ax.dx();
#pragma omp parallel
    {
        CVec B(n);
#pragma omp for schedule(static)
        for (long r = 0; r < static_cast<long>(W.xs.size()); ++r) {
            const int i = static_cast<int>(r) * x_stride;
            std::fill(B.begin(), B.end(), cplx(0.0));
            // m = -n/2 has no mirror partner and is dropped so W(f) stays exactly real.
            for (int m = -n / 2 + 1; m < n / 2; ++m) {
                const int p1 = 2 * i + m, p2 = 2 * i - m;
                if (p1 < 0 || p1 >= 2 * n || p2 < 0 || p2 >= 2 * n) continue;
                B[(m + n) % n] = F[p1] * std::conj(G[p2]) * sign_pow(m + n);
            }
            dft(B.data(), B.data(), n, -1);
            for (int k = 0; k < n; ++k) W.values[r * n + k] = dx * B[k];
        }
    }
    return W;
}

namespace {

SampledSignal moyal_impl(const PhaseField& F, const GaussWindow& w) {
    if (F.kind != FieldKind::STFT) throw KindError("moyal_reconstruct: field must be an STFT");
    if (F.window_id != w.id()) throw KindError("moyal_reconstruct: window differs from the analysis window");
    const AxisSpec& ax = F.axis;
    require_1d(ax, "moyal_reconstruct");
    const int n = ax.n;
    if (static_cast<int>(F.xis.size()) != n) throw GridError("moyal_reconstruct: needs the full frequency grid");
    // Divides by ||w||^2 so any normalization reconstructs.
    const double wn2 = w.scale() * w.scale() * std::sqrt(kPi);
    const double c = F.dx() * ax.dxi() / (2.0 * kPi) / wn2;
    CVec acc(n, 0.0);
#pragma omp parallel
    {
        CVec buf(n), local(n, 0.0);
#pragma omp for schedule(static)
        for (long i = 0; i < static_cast<long>(F.xs.size()); ++i) {
            for (int k = 0; k < n; ++k) buf[k] = F.values[i * n + k] * sign_pow(k - n / 2);
            dft(buf.data(), buf.data(), n, +1);
            const double x0 = F.xs[i];
            for (int j = 0; j < n; ++j) {
                const double y = ax.x(j) - x0;
                if (std::abs(y) > 40.0) continue;
                local[j] += buf[j] * (sign_pow(j) * w(y) * c);
            }
        }
#pragma omp critical
        for (int j = 0; j < n; ++j) acc[j] += local[j];
    }
    return SampledSignal(ax, std::move(acc), "moyal");
}

}  // namespace

SampledSignal moyal_reconstruct(const PhaseField& F, const GaussWindow& w) { return moyal_impl(F, w); }

Reconstruction moyal_reconstruct(const PhaseField& F, const GaussWindow& w, const SampledSignal& source) {
    Reconstruction r;
    r.u = moyal_impl(F, w);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < source.values.size(); ++j) {
        num += std::norm(r.u.values[j] - source.values[j]);
        den += std::norm(source.values[j]);
    }
    r.rel_error = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
    return r;
}

SampledSignal spectral_D(const SampledSignal& u, int m) {
    require_1d(u.axis, "spectral_D");
    const int n = u.axis.n;
    CVec U(n);
    dft(u.values.data(), U.data(), n, -1);
    const double dk = 2.0 * kPi / (n * u.axis.dx());
    for (int k = 0; k < n; ++k) {
        const int ks = k < n / 2 ? k : k - n;
        if (k == n / 2 && m % 2 == 1) U[k] = 0.0;
        else U[k] *= std::pow(ks * dk, m);
    }
    dft(U.data(), U.data(), n, +1);
    for (auto& v : U) v /= static_cast<double>(n);
    SampledSignal out(u.axis, std::move(U), u.label);
    return out;
}

}  // namespace wfg
