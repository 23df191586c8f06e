#include "wfg/quantize.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

#include "wfg/fft.hpp"
#include "wfg/transforms.hpp"

namespace wfg {

namespace {

struct Rational {
    int P, Q;
};

Rational as_rational(double t) {
    for (int Q = 1; Q <= 4; ++Q)
        for (int P = 0; P <= Q; ++P)
            if (std::abs(t - double(P) / Q) < 1e-12) return {P, Q};
    throw UnsupportedSymbol("quantization parameter t must be P/Q with Q <= 4 for xi-quadrature symbols");
}

bool is_differential(const SymbolTerm& t, int d) {
    if (!t.bumps.empty()) return false;
    if (t.gauss)
        for (int i = d; i < 2 * d; ++i)
            if (t.gauss->A[i] != 0.0) return false;
    return true;
}

void split_terms(const SymbolExpr& a, SymbolExpr& diff, SymbolExpr& quad) {
    diff = SymbolExpr{a.d, {}, a.declared_order};
    quad = SymbolExpr{a.d, {}, a.declared_order};
    for (const auto& t : a.terms) (is_differential(t, a.d) ? diff : quad).terms.push_back(t);
}

double binom(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Support of a quadrature term in (x, xi); throws when xi decay is missing.
struct Box {
    double x0, x1, xi0, xi1;
};

Box term_box(const SymbolTerm& t, const AxisSpec& ax) {
    const double ximax = ax.xi_max();
    Box b{-ax.L, ax.L, -1e300, 1e300};
    for (const auto& bf : t.bumps) {
        b.x0 = std::max(b.x0, bf.center[0] - bf.R);
        b.x1 = std::min(b.x1, bf.center[0] + bf.R);
        b.xi0 = std::max(b.xi0, bf.center[1] - bf.R);
        b.xi1 = std::min(b.xi1, bf.center[1] + bf.R);
    }
    if (t.gauss && t.gauss->A[0] > 0) {
        const double s = std::sqrt(39.0 / t.gauss->A[0]);
        b.x0 = std::max(b.x0, t.gauss->center[0] - s);
        b.x1 = std::min(b.x1, t.gauss->center[0] + s);
    }
    if (t.gauss && t.gauss->A[1] > 0) {
        // exp(-A s^2) < 1e-17 beyond s = sqrt(39 / A).
        const double s = std::sqrt(39.0 / t.gauss->A[1]);
        b.xi0 = std::max(b.xi0, t.gauss->center[1] - s);
        b.xi1 = std::min(b.xi1, t.gauss->center[1] + s);
    }
    if (b.xi0 < -ximax || b.xi1 >= ximax)
        throw UnsupportedSymbol("symbol does not decay in xi inside the resolvable band |xi| < xi_max");
    return b;
}

}  // namespace

DenseMatrix spectral_D_matrix(const AxisSpec& axis, int m) {
    const int n = axis.n;
    CVec c(n);
    const double dk = 2.0 * kPi / (n * axis.dx());
    for (int k = 0; k < n; ++k) {
        const int ks = k < n / 2 ? k : k - n;
        c[k] = (k == n / 2 && m % 2 == 1) ? 0.0 : std::pow(ks * dk, m);
    }
    dft(c.data(), c.data(), n, +1);
    DenseMatrix D(n, n);
    const double s = 1.0 / (n * axis.dx());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) D(i, j) = c[((i - j) % n + n) % n] * s;
    return D;
}

MidpointTable build_midpoint_table(const SymbolExpr& a, double t, const AxisSpec& axis) {
    if (a.d != 1 || axis.d != 1) throw UnsupportedSymbol("quantize: only d = 1 is supported");
    SymbolExpr diff, quad;
    split_terms(a, diff, quad);
    MidpointTable T;
    T.axis = axis;
    if (quad.terms.empty()) return T;
    const Rational r = as_rational(t);
    T.P = r.P;
    T.Q = r.Q;
    const int n = axis.n, M = 2 * n, Q = r.Q;
    const double dx = axis.dx(), dxi = kPi / (2.0 * axis.L);

    // Union of supports over terms.
    double x0 = 1e300, x1 = -1e300, xi0 = 1e300, xi1 = -1e300;
    for (const auto& tm : quad.terms) {
        const Box b = term_box(tm, axis);
        x0 = std::min(x0, b.x0);
        x1 = std::max(x1, b.x1);
        xi0 = std::min(xi0, b.xi0);
        xi1 = std::max(xi1, b.xi1);
    }
    const int qmax = Q * (n - 1);
    const int qa = std::max(0, static_cast<int>(std::floor((x0 + axis.L) * Q / dx)));
    const int qb = std::min(qmax, static_cast<int>(std::ceil((x1 + axis.L) * Q / dx)));
    const int ka = std::max(0, static_cast<int>(std::floor(xi0 / dxi)) + n);
    const int kb = std::min(M - 1, static_cast<int>(std::ceil(xi1 / dxi)) + n);
    if (qa > qb || ka > kb) return T;
    for (int q = qa; q <= qb; ++q) T.qs.push_back(q);
    T.rows.assign(T.qs.size(), CVec());
    const double c = dxi / (2.0 * kPi);
#pragma omp parallel
    {
        std::vector<double> z(2);
#pragma omp for schedule(dynamic, 4)
        for (long r2 = 0; r2 < static_cast<long>(T.qs.size()); ++r2) {
            CVec row(M, 0.0);
            z[0] = -axis.L + T.qs[r2] * dx / Q;
            bool any = false;
            for (int k = ka; k <= kb; ++k) {
                z[1] = (k - n) * dxi;
                row[k] = quad.eval(z);
                any = any || row[k] != cplx(0.0);
            }
            if (any) {
                dft(row.data(), row.data(), M, +1);
                for (int l = 0; l < M; ++l) row[l] *= c * ((l % 2) ? -1.0 : 1.0);
            } else {
                row.clear();
            }
            T.rows[r2] = std::move(row);
        }
    }
    // Drop rows where the symbol vanished on the whole frequency range.
    std::vector<int> qs;
    std::vector<CVec> rows;
    for (std::size_t i = 0; i < T.qs.size(); ++i)
        if (!T.rows[i].empty()) qs.push_back(T.qs[i]), rows.push_back(std::move(T.rows[i]));
    T.qs = std::move(qs);
    T.rows = std::move(rows);
    return T;
}

namespace {

// Calls f(i, j) for every pair with P i + (Q - P) j == q.
template <class F>
void for_pairs(int P, int Q, int q, int n, F f) {
    const int R = Q - P;
    if (R == 0) {
        if (q % P == 0 && q / P < n)
            for (int j = 0; j < n; ++j) f(q / P, j);
        return;
    }
    if (P == 0) {
        if (q % R == 0 && q / R < n)
            for (int i = 0; i < n; ++i) f(i, q / R);
        return;
    }
    for (int i = 0; i < n; ++i) {
        const int num = q - P * i;
        if (num < 0) break;
        if (num % R) continue;
        const int j = num / R;
        if (j < n) f(i, j);
    }
}

std::vector<SampledSignal> table_apply(const MidpointTable& T, const std::vector<SampledSignal>& us, bool parallel) {
    const int n = T.axis.n, M = 2 * n;
    const double dx = T.axis.dx();
    const std::size_t ns = us.size();
    std::vector<CVec> out(ns, CVec(n, 0.0));
    if (T.qs.empty()) {
        std::vector<SampledSignal> res;
        for (std::size_t s = 0; s < ns; ++s) res.emplace_back(T.axis, out[s], us[s].label);
        return res;
    }
#pragma omp parallel if (parallel)
    {
        std::vector<CVec> local(ns, CVec(n, 0.0));
#pragma omp for schedule(dynamic, 4)
        for (long r = 0; r < static_cast<long>(T.qs.size()); ++r) {
            const CVec& row = T.rows[r];
            for_pairs(T.P, T.Q, T.qs[r], n, [&](int i, int j) {
                const cplx k = row[((i - j) % M + M) % M] * dx;
                for (std::size_t s = 0; s < ns; ++s) local[s][i] += k * us[s].values[j];
            });
        }
#pragma omp critical
        for (std::size_t s = 0; s < ns; ++s)
            for (int i = 0; i < n; ++i) out[s][i] += local[s][i];
    }
    std::vector<SampledSignal> res;
    for (std::size_t s = 0; s < ns; ++s) res.emplace_back(T.axis, std::move(out[s]), us[s].label);
    return res;
}

void check_axes(const std::vector<SampledSignal>& us, const AxisSpec& ax) {
    for (const auto& u : us)
        if (!(u.axis == ax)) throw GridError("operator and signal live on different grids");
}

// Terms p(x) xi^beta of the differential part, grouped by beta.
std::map<int, SymbolExpr> by_xi_power(const SymbolExpr& diff) {
    std::map<int, SymbolExpr> g;
    for (auto t : diff.terms) {
        const int beta = t.powers[1];
        t.powers[1] = 0;
        auto it = g.find(beta);
        if (it == g.end()) it = g.emplace(beta, SymbolExpr{1, {}, 0.0}).first;
        it->second.terms.push_back(t);
    }
    return g;
}

}  // namespace

std::vector<SampledSignal> MidpointTable::apply(const std::vector<SampledSignal>& us) const {
    check_axes(us, axis);
    return table_apply(*this, us, true);
}

std::vector<SampledSignal> MidpointTable::apply_serial(const std::vector<SampledSignal>& us) const {
    check_axes(us, axis);
    return table_apply(*this, us, false);
}

std::vector<SampledSignal> apply_quantized(const SymbolExpr& a, double t, const std::vector<SampledSignal>& us) {
    if (us.empty()) return {};
    const AxisSpec ax = us[0].axis;
    check_axes(us, ax);
    SymbolExpr diff, quad;
    split_terms(a, diff, quad);
    auto out = table_apply(build_midpoint_table(quad, t, ax), us, true);
    if (diff.terms.empty()) return out;
    // Op_t(p(x) xi^b) = sum_k C(b, k) (-i (1 - t))^k p^(k)(x) D^{b - k}
    for (const auto& [beta, p] : by_xi_power(diff)) {
        for (int k = 0; k <= beta; ++k) {
            const SymbolExpr pk = differentiate_exact(p, {k, 0});
            const cplx c = binom(beta, k) * std::pow(cplx(0, -(1.0 - t)), k);
            CVec pv(ax.n);
            for (int i = 0; i < ax.n; ++i) pv[i] = c * pk.eval({ax.x(i), 0.0});
            for (std::size_t s = 0; s < us.size(); ++s) {
                const SampledSignal Du = beta - k ? spectral_D(us[s], beta - k) : us[s];
                for (int i = 0; i < ax.n; ++i) out[s].values[i] += pv[i] * Du.values[i];
            }
        }
    }
    for (auto& o : out) o.refresh();
    return out;
}

SampledSignal apply_quantized(const SymbolExpr& a, double t, const SampledSignal& u) {
    return apply_quantized(a, t, std::vector<SampledSignal>{u})[0];
}

OperatorKernel build_kernel(const SymbolExpr& a, double t, const AxisSpec& axis) {
    axis.validate();
    if (a.d != 1 || axis.d != 1) throw UnsupportedSymbol("quantize: only d = 1 is supported");
    if (axis.n > 2048) throw GridError("dense kernels are limited to n <= 2048");
    if (t < 0 || t > 1) throw ConfigError("quantization parameter must lie in [0, 1]");
    const int n = axis.n, M = 2 * n;
    OperatorKernel K;
    K.axis = axis;
    K.t = t;
    K.symbol_id = a.id();
    K.K = DenseMatrix::Zero(n, n);
    SymbolExpr diff, quad;
    split_terms(a, diff, quad);
    const MidpointTable T = build_midpoint_table(quad, t, axis);
    for (std::size_t r = 0; r < T.qs.size(); ++r) {
        const CVec& row = T.rows[r];
        for_pairs(T.P, T.Q, T.qs[r], n, [&](int i, int j) { K.K(i, j) += row[((i - j) % M + M) % M]; });
    }
    const double dx = axis.dx();
    for (const auto& [beta, p] : by_xi_power(diff)) {
        for (int k = 0; k <= beta; ++k) {
            const SymbolExpr pk = differentiate_exact(p, {k, 0});
            const cplx c = binom(beta, k) * std::pow(cplx(0, -(1.0 - t)), k);
            const int m = beta - k;
            if (m == 0) {
                for (int i = 0; i < n; ++i) K.K(i, i) += c * pk.eval({axis.x(i), 0.0}) / dx;
            } else {
                const DenseMatrix D = spectral_D_matrix(axis, m);
#pragma omp parallel for schedule(static)
                for (int i = 0; i < n; ++i) {
                    const cplx pi = c * pk.eval({axis.x(i), 0.0});
                    for (int j = 0; j < n; ++j) K.K(i, j) += pi * D(i, j);
                }
            }
        }
    }
    return K;
}

OperatorKernel build_kernel(const DilatedSymbol& a, double t, const AxisSpec& axis) {
    return build_kernel(a.materialize(), t, axis);
}

namespace {

SampledSignal kernel_apply(const OperatorKernel& K, const SampledSignal& u, bool parallel) {
    if (!(u.axis == K.axis)) throw GridError("operator and signal live on different grids");
    const int n = K.axis.n;
    const double dx = K.axis.dx();
    CVec out(n);
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < n; ++i) {
        cplx s = 0.0;
        const cplx* row = K.K.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) s += row[j] * u.values[j];
        out[i] = s * dx;
    }
    return SampledSignal(K.axis, std::move(out), u.label);
}

}  // namespace

SampledSignal OperatorKernel::apply(const SampledSignal& u) const { return kernel_apply(*this, u, true); }
SampledSignal OperatorKernel::apply_serial(const SampledSignal& u) const { return kernel_apply(*this, u, false); }

std::shared_ptr<const OperatorKernel> KernelCache::get(const SymbolExpr& a, double h, double t, const AxisSpec& axis) {
    std::ostringstream key;
    key.precision(17);
    key << a.id() << '|' << h << '|' << t << '|' << axis.L << '|' << axis.n << '|' << axis.d;
    const std::string k = key.str();
    {
        std::shared_lock lock(mu_);
        auto it = map_.find(k);
        if (it != map_.end()) return it->second;
    }
    auto K = std::make_shared<const OperatorKernel>(build_kernel(DilatedSymbol{a, h}, t, axis));
    std::unique_lock lock(mu_);
    auto [it, inserted] = map_.emplace(k, K);
    if (inserted) {
        order_.push_back(k);
        while (order_.size() > capacity_) {
            map_.erase(order_.front());
            order_.erase(order_.begin());
        }
    }
    return it->second;
}

std::size_t KernelCache::size() const {
    std::shared_lock lock(mu_);
    return map_.size();
}

void KernelCache::clear() {
    std::unique_lock lock(mu_);
    map_.clear();
    order_.clear();
}

void KernelCache::set_capacity(std::size_t c) {
    std::unique_lock lock(mu_);
    capacity_ = std::max<std::size_t>(c, 1);
}

KernelCache& kernel_cache() {
    static KernelCache cache;
    return cache;
}

SampledSignal apply_weyl(const DilatedSymbol& a, const SampledSignal& u) {
    return kernel_cache().get(a.base, a.h, 0.5, u.axis)->apply(u);
}

SampledSignal apply_weyl(const SymbolExpr& a, const SampledSignal& u) { return apply_weyl(DilatedSymbol{a, 1.0}, u); }

namespace {

// All multi-indices of length d with total |b| == j.
void multi_indices(int d, int j, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == d - 1) {
        cur.push_back(j);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int k = 0; k <= j; ++k) {
        cur.push_back(k);
        multi_indices(d, j - k, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> multi_indices(int d, int j) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    multi_indices(d, j, cur, out);
    return out;
}

double multi_factorial(const std::vector<int>& b) {
    double r = 1;
    for (int k : b) r *= factorial(k);
    return r;
}

}  // namespace

SymbolExpr weyl_product_expand(const SymbolExpr& a, const SymbolExpr& b, int N, double h) {
    if (a.d != b.d) throw ConfigError("weyl_product_expand: dimension mismatch");
    if (N < 1) throw ConfigError("weyl_product_expand: N must be >= 1");
    const int d = a.d;
    SymbolExpr sum{d, {}, a.declared_order + b.declared_order};
    // P^j = sum_{|beta| + |gamma| = j} j! / (beta! gamma!) (d_y d_theta)^beta (-d_eta d_t)^gamma
    for (int j = 0; j < N; ++j) {
        const cplx pref = std::pow(cplx(0, 0.5), j) * std::pow(h, 2 * j);
        for (int jb = 0; jb <= j; ++jb) {
            const int jg = j - jb;
            for (const auto& beta : multi_indices(d, jb))
                for (const auto& gamma : multi_indices(d, jg)) {
                    const double w = (jg % 2 ? -1.0 : 1.0) / (multi_factorial(beta) * multi_factorial(gamma));
                    std::vector<int> da(2 * d), db(2 * d);
                    for (int i = 0; i < d; ++i) {
                        da[i] = beta[i];
                        da[d + i] = gamma[i];
                        db[i] = gamma[i];
                        db[d + i] = beta[i];
                    }
                    const SymbolExpr A = differentiate_exact(a, da);
                    if (A.terms.empty()) continue;
                    const SymbolExpr B = differentiate_exact(b, db);
                    if (B.terms.empty()) continue;
                    sum = sum + (pref * w) * (A * B);
                }
        }
    }
    return dilate(sum, h);
}

SymbolExpr kn_to_weyl(const SymbolExpr& a, int N, double h) {
    if (N < 1) throw ConfigError("kn_to_weyl: N must be >= 1");
    const int d = a.d;
    SymbolExpr sum{d, {}, a.declared_order};
    // ((i/2) d_x . d_xi)^j / j! = (i/2)^j sum_{|beta| = j} d_x^beta d_xi^beta / beta!
    for (int j = 0; j < N; ++j) {
        const cplx pref = std::pow(cplx(0, 0.5), j) * std::pow(h, 2 * j);
        for (const auto& beta : multi_indices(d, j)) {
            std::vector<int> al(2 * d);
            for (int i = 0; i < d; ++i) al[i] = al[d + i] = beta[i];
            const SymbolExpr D = differentiate_exact(a, al);
            if (D.terms.empty()) continue;
            sum = sum + (pref / multi_factorial(beta)) * D;
        }
    }
    return dilate(sum, h);
}

}  // namespace wfg
