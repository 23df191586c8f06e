#include "wfg/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wfg/quantize.hpp"
#include "wfg/symbols.hpp"

namespace wfg {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

const char* to_string(WfMethod m) {
    switch (m) {
        case WfMethod::GABOR_CONE: return "GABOR_CONE";
        case WfMethod::GABOR_LATTICE: return "GABOR_LATTICE";
        case WfMethod::HSTFT_LOCAL: return "HSTFT_LOCAL";
        default: return "HOMOGENEOUS";
    }
}

WfMethod wf_method_from_string(const std::string& s) {
    if (s == "GABOR_CONE" || s == "gabor") return WfMethod::GABOR_CONE;
    if (s == "GABOR_LATTICE" || s == "gabor-lattice") return WfMethod::GABOR_LATTICE;
    if (s == "HSTFT_LOCAL" || s == "hstft-local") return WfMethod::HSTFT_LOCAL;
    if (s == "HOMOGENEOUS" || s == "hwf") return WfMethod::HOMOGENEOUS;
    throw ConfigError("unknown method '" + s + "'");
}

void EstimatorParams::validate() const {
    if (n_dirs < 1) throw ConfigError("estimator: n_dirs must be >= 1");
    if (!(theta_deg > 0 && theta_deg < 90)) throw ConfigError("estimator: theta_deg must lie in (0, 90)");
    if (!(r_min > 0) || !(rho > 1)) throw ConfigError("estimator: need r_min > 0 and rho > 1");
    if (r_max < 0) throw ConfigError("estimator: r_max must be >= 0");
    if (x_stride < 1) throw ConfigError("estimator: x_stride must be >= 1");
    if (!(lattice_alpha > 0 && lattice_beta > 0)) throw ConfigError("estimator: lattice constants must be positive");
    if (lattice_alpha * lattice_beta >= 2 * kPi) throw ConfigError("estimator: lattice needs alpha * beta < 2 pi");
    if (!(h_base > 0 && h_base < 1) || h_count < 1) throw ConfigError("estimator: need 0 < h_base < 1 and h_count >= 1");
    if (!(bump_R > 0 && bump_R < 1)) throw ConfigError("estimator: bump_R must lie in (0, 1)");
    if (bump_p < 3) throw ConfigError("estimator: bump_p must be >= 3");
    if (fit.tail < 2 || fit.min_points < 2) throw ConfigError("estimator: fit tail and min_points must be >= 2");
}

double EstimatorParams::theta() const { return theta_deg * kPi / 180.0; }

double EstimatorParams::resolved_r_max(const SampledSignal& u) const {
    double r = r_max > 0 ? r_max : 0.8 * std::min(u.axis.L, u.axis.xi_max());
    r = std::min(r, std::min(u.axis.L, u.axis.xi_max()));
    auto it = u.meta.find("valid_radius");
    if (it != u.meta.end() && it->second > 0) r = std::min(r, it->second);
    return r;
}

double EstimatorParams::resolved_U() const { return U_radius > 0 ? U_radius : std::sin(theta()); }

std::vector<double> EstimatorParams::h_ladder() const {
    std::vector<double> hs;
    for (int k = 0; k < h_count; ++k) hs.push_back(std::pow(h_base, k));
    return hs;
}

nlohmann::json EstimatorParams::to_json() const {
    return {{"n_dirs", n_dirs},
            {"theta_deg", theta_deg},
            {"r_min", r_min},
            {"rho", rho},
            {"r_max", r_max},
            {"x_stride", x_stride},
            {"floor_rel", floor_rel},
            {"hwf_floor_rel", hwf_floor_rel},
            {"lattice_alpha", lattice_alpha},
            {"lattice_beta", lattice_beta},
            {"U_radius", U_radius},
            {"h_base", h_base},
            {"h_count", h_count},
            {"bump_R", bump_R},
            {"bump_p", bump_p},
            {"hwf_scale_min", hwf_scale_min},
            {"fit",
             {{"N_thr", fit.N_thr},
              {"q_min", fit.q_min},
              {"tau", fit.tau},
              {"tail", fit.tail},
              {"min_points", fit.min_points},
              {"envelope", fit.envelope}}}};
}

EstimatorParams EstimatorParams::from_json(const nlohmann::json& j) {
    EstimatorParams p;
    try {
        p.n_dirs = j.value("n_dirs", p.n_dirs);
        p.theta_deg = j.value("theta_deg", p.theta_deg);
        p.r_min = j.value("r_min", p.r_min);
        p.rho = j.value("rho", p.rho);
        p.r_max = j.value("r_max", p.r_max);
        p.x_stride = j.value("x_stride", p.x_stride);
        p.floor_rel = j.value("floor_rel", p.floor_rel);
        p.hwf_floor_rel = j.value("hwf_floor_rel", p.hwf_floor_rel);
        p.lattice_alpha = j.value("lattice_alpha", p.lattice_alpha);
        p.lattice_beta = j.value("lattice_beta", p.lattice_beta);
        p.U_radius = j.value("U_radius", p.U_radius);
        p.h_base = j.value("h_base", p.h_base);
        p.h_count = j.value("h_count", p.h_count);
        p.bump_R = j.value("bump_R", p.bump_R);
        p.bump_p = j.value("bump_p", p.bump_p);
        p.hwf_scale_min = j.value("hwf_scale_min", p.hwf_scale_min);
        if (j.contains("fit")) {
            const auto& f = j["fit"];
            p.fit.N_thr = f.value("N_thr", p.fit.N_thr);
            p.fit.q_min = f.value("q_min", p.fit.q_min);
            p.fit.tau = f.value("tau", p.fit.tau);
            p.fit.tail = f.value("tail", p.fit.tail);
            p.fit.min_points = f.value("min_points", p.fit.min_points);
            p.fit.envelope = f.value("envelope", p.fit.envelope);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("estimator params: ") + e.what());
    }
    p.validate();
    return p;
}

std::vector<std::size_t> WaveFrontReport::flagged_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fits.size(); ++i)
        if (fits[i].classification == DecayClass::SLOW) out.push_back(i);
    return out;
}

namespace {

// Directions sorted by angle for window lookups.
struct AngleIndex {
    std::vector<double> ang;
    std::vector<int> idx;

    explicit AngleIndex(const std::vector<Direction>& dirs) {
        std::vector<std::pair<double, int>> v;
        for (std::size_t j = 0; j < dirs.size(); ++j) v.emplace_back(dirs[j].angle(), static_cast<int>(j));
        std::sort(v.begin(), v.end());
        for (auto& [a, j] : v) ang.push_back(a), idx.push_back(j);
    }

    // Calls f(j) for every direction within theta of angle a (circular).
    template <class F>
    void within(double a, double theta, F f) const {
        for (double shift : {-2 * kPi, 0.0, 2 * kPi}) {
            const double lo = a - theta + shift, hi = a + theta + shift;
            auto it = std::lower_bound(ang.begin(), ang.end(), lo - 1e-12);
            for (; it != ang.end() && *it <= hi + 1e-12; ++it) {
                const int j = idx[it - ang.begin()];
                if (angular_distance(*it, a) <= theta) f(j);
            }
        }
    }
};

struct Shells {
    std::vector<double> lo, hi;

    Shells(double r_min, double rho, double r_max) {
        lo = geometric_radii(r_min, rho, r_max);
        for (std::size_t i = 0; i < lo.size(); ++i) hi.push_back(shell_outer(lo, i));
    }
    int find(double r) const {
        if (lo.empty() || r < lo.front() || r >= hi.back()) return -1;
        auto it = std::upper_bound(lo.begin(), lo.end(), r);
        const int s = static_cast<int>(it - lo.begin()) - 1;
        return (r < hi[s]) ? s : -1;
    }
};

WaveFrontReport make_report(const std::string& id, WfMethod m, const std::vector<Direction>& dirs,
                            const EstimatorParams& p, double r_max) {
    WaveFrontReport r;
    r.signal_id = id;
    r.method = m;
    r.directions = dirs;
    r.theta = p.theta();
    r.params = p.to_json();
    r.params["r_max_used"] = r_max;
    return r;
}

void finish(WaveFrontReport& r) {
    for (std::size_t i = 0; i < r.fits.size(); ++i)
        if (r.fits[i].classification == DecayClass::SLOW) r.flagged.add(r.directions[i], r.theta);
}

void check_dirs(const std::vector<Direction>& dirs) {
    if (dirs.empty()) throw ConfigError("estimator: direction list is empty");
    for (const auto& d : dirs)
        if (d.w.size() != 2) throw GridError("estimator: phase-space estimators support d = 1 only");
}

std::vector<std::vector<double>> shell_sups(const std::vector<double>& xs, const std::vector<double>& xis,
                                            const CVec& vals, const std::vector<Direction>& dirs, double theta,
                                            const Shells& sh) {
    const AngleIndex ai(dirs);
    const std::size_t nd = dirs.size(), ns = sh.lo.size(), nk = xis.size();
    std::vector<std::vector<double>> sup(nd, std::vector<double>(ns, -1.0));
#pragma omp parallel
    {
        std::vector<std::vector<double>> loc(nd, std::vector<double>(ns, -1.0));
#pragma omp for schedule(static)
        for (long i = 0; i < static_cast<long>(xs.size()); ++i) {
            const double x = xs[i];
            for (std::size_t k = 0; k < nk; ++k) {
                const double xi = xis[k];
                const int s = sh.find(std::hypot(x, xi));
                if (s < 0) continue;
                const double m = std::abs(vals[i * nk + k]);
                ai.within(std::atan2(xi, x), theta, [&](int j) { loc[j][s] = std::max(loc[j][s], m); });
            }
        }
#pragma omp critical
        for (std::size_t j = 0; j < nd; ++j)
            for (std::size_t s = 0; s < ns; ++s) sup[j][s] = std::max(sup[j][s], loc[j][s]);
    }
    for (auto& row : sup)
        for (auto& v : row)
            if (v < 0) v = kNaN;
    return sup;
}

double max_abs(const CVec& v) {
    double m = 0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

PhaseField analysis_stft(const SampledSignal& u, const EstimatorParams& p) {
    if (u.axis.d != 1) throw GridError("estimator: d = 1 only");
    PhaseGridSpec pg;
    pg.x_stride = p.x_stride;
    return stft(u, GaussWindow{}, pg);
}

}  // namespace

WaveFrontReport gabor_wf_from(const PhaseField& V, const std::string& id, const std::vector<Direction>& dirs,
                              const EstimatorParams& p, double r_max) {
    check_dirs(dirs);
    p.validate();
    const Shells sh(p.r_min, p.rho, r_max);
    if (sh.lo.empty()) throw EstimatorError("gabor_wf: no shell fits between r_min and r_max");
    auto sups = shell_sups(V.xs, V.xis, V.values, dirs, p.theta(), sh);
    const double floor = p.floor_rel * max_abs(V.values);
    WaveFrontReport r = make_report(id, WfMethod::GABOR_CONE, dirs, p, r_max);
    bool any = false;
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        for (double v : sups[j]) any = any || !std::isnan(v);
        r.fits.push_back(fit_decay(sh.lo, sups[j], floor, p.fit));
    }
    if (!any) throw EstimatorError("gabor_wf: every shell is empty");
    finish(r);
    return r;
}

WaveFrontReport gabor_wf(const SampledSignal& u, const std::vector<Direction>& dirs, const EstimatorParams& p) {
    p.validate();
    const PhaseField V = analysis_stft(u, p);
    WaveFrontReport r = gabor_wf_from(V, u.label, dirs, p, p.resolved_r_max(u));
    r.warnings = u.warnings;
    return r;
}

WaveFrontReport gabor_wf_lattice(const SampledSignal& u, const std::vector<Direction>& dirs, const EstimatorParams& p) {
    check_dirs(dirs);
    p.validate();
    const double r_max = p.resolved_r_max(u);
    const Shells sh(p.r_min, p.rho, r_max);
    if (sh.lo.empty()) throw EstimatorError("gabor_wf_lattice: no shell fits between r_min and r_max");
    const double outer = sh.hi.back();
    std::vector<std::array<double, 2>> pts{{0.0, 0.0}};
    const int ka = static_cast<int>(std::ceil(outer / p.lattice_alpha)), kb = static_cast<int>(std::ceil(outer / p.lattice_beta));
    for (int a = -ka; a <= ka; ++a)
        for (int b = -kb; b <= kb; ++b) {
            const double x = a * p.lattice_alpha, xi = b * p.lattice_beta;
            const double r = std::hypot(x, xi);
            if (r > 0 && r < outer) pts.push_back({x, xi});
        }
    const CVec V = stft_at(u, GaussWindow{}, pts);
    const double floor = p.floor_rel * max_abs(V);
    const AngleIndex ai(dirs);
    const std::size_t nd = dirs.size(), ns = sh.lo.size();
    std::vector<std::vector<double>> sup(nd, std::vector<double>(ns, -1.0));
    for (std::size_t q = 1; q < pts.size(); ++q) {
        const int s = sh.find(std::hypot(pts[q][0], pts[q][1]));
        if (s < 0) continue;
        const double m = std::abs(V[q]);
        ai.within(std::atan2(pts[q][1], pts[q][0]), p.theta(), [&](int j) { sup[j][s] = std::max(sup[j][s], m); });
    }
    WaveFrontReport r = make_report(u.label, WfMethod::GABOR_LATTICE, dirs, p, r_max);
    for (std::size_t j = 0; j < nd; ++j) {
        for (auto& v : sup[j])
            if (v < 0) v = kNaN;
        r.fits.push_back(fit_decay(sh.lo, sup[j], floor, p.fit));
    }
    r.warnings = u.warnings;
    finish(r);
    return r;
}

namespace {

std::vector<double> hstft_ladder(const EstimatorParams& p, double U, double r_max) {
    std::vector<double> hs;
    for (double h : p.h_ladder())
        if (1.0 / h >= p.r_min * (1 - 1e-9) && (1.0 + U) / h <= r_max) hs.push_back(h);
    return hs;
}

double ball_sup(const PhaseField& V, double cx, double cxi, double rad) {
    const double x0 = V.xs.front(), dx = V.dx(), xi0 = V.xis.front(), dxi = V.dxi();
    const long ia = std::max(0L, static_cast<long>(std::floor((cx - rad - x0) / dx)));
    const long ib = std::min(static_cast<long>(V.xs.size()) - 1, static_cast<long>(std::ceil((cx + rad - x0) / dx)));
    const long ka = std::max(0L, static_cast<long>(std::floor((cxi - rad - xi0) / dxi)));
    const long kb = std::min(static_cast<long>(V.xis.size()) - 1, static_cast<long>(std::ceil((cxi + rad - xi0) / dxi)));
    double m = -1.0;
    for (long i = ia; i <= ib; ++i)
        for (long k = ka; k <= kb; ++k)
            if (std::hypot(V.xs[i] - cx, V.xis[k] - cxi) <= rad) m = std::max(m, std::abs(V.at(i, k)));
    return m < 0 ? kNaN : m;
}

}  // namespace

DecayFit hstft_local(const SampledSignal& u, const Direction& z0, double U_radius, const std::vector<double>& h_ladder,
                     double floor, const FitParams& fit) {
    if (z0.w.size() != 2) throw GridError("hstft_local: d = 1 only");
    if (!(U_radius > 0 && U_radius < 1)) throw ConfigError("hstft_local: U_radius must lie in (0, 1)");
    std::vector<double> hs = h_ladder;
    std::sort(hs.begin(), hs.end(), std::greater<double>());
    std::vector<double> absc, sups;
    const double cx = z0.w[0], cxi = z0.w[1];
    for (double h : hs) {
        HRegion reg{std::abs(cx) + U_radius, std::abs(cxi) + U_radius, 1};
        const PhaseField T = hstft(u, h, reg);
        double m = -1;
        for (std::size_t i = 0; i < T.xs.size(); ++i)
            for (std::size_t k = 0; k < T.xis.size(); ++k)
                if (std::hypot(T.xs[i] - cx, T.xis[k] - cxi) <= U_radius) m = std::max(m, std::abs(T.at(i, k)));
        absc.push_back(1.0 / h);
        sups.push_back(m < 0 ? kNaN : m);
    }
    return fit_decay(absc, sups, floor, fit);
}

WaveFrontReport hstft_local_from(const PhaseField& V, const std::string& id, const std::vector<Direction>& dirs,
                                 const EstimatorParams& p, double r_max) {
    check_dirs(dirs);
    p.validate();
    const double U = p.resolved_U();
    const auto hs = hstft_ladder(p, U, r_max);
    const double floor = p.floor_rel * max_abs(V.values);
    WaveFrontReport r = make_report(id, WfMethod::HSTFT_LOCAL, dirs, p, r_max);
    r.fits.resize(dirs.size());
#pragma omp parallel for schedule(dynamic)
    for (long j = 0; j < static_cast<long>(dirs.size()); ++j) {
        std::vector<double> absc, sups;
        for (double h : hs) {
            const double s = ball_sup(V, dirs[j].w[0] / h, dirs[j].w[1] / h, U / h);
            absc.push_back(1.0 / h);
            sups.push_back(s / (h * std::sqrt(2 * kPi)));
        }
        r.fits[j] = fit_decay(absc, sups, floor, p.fit);
    }
    finish(r);
    return r;
}

WaveFrontReport hstft_local_report(const SampledSignal& u, const std::vector<Direction>& dirs, const EstimatorParams& p) {
    p.validate();
    const PhaseField V = analysis_stft(u, p);
    WaveFrontReport r = hstft_local_from(V, u.label, dirs, p, p.resolved_r_max(u));
    r.warnings = u.warnings;
    return r;
}

std::vector<WaveFrontReport> hwf_estimate_batch(const std::vector<SampledSignal>& us,
                                                const std::vector<Direction>& dirs, const EstimatorParams& p) {
    check_dirs(dirs);
    p.validate();
    if (us.empty()) return {};
    const AxisSpec ax = us[0].axis;
    for (const auto& u : us)
        if (!(u.axis == ax)) throw GridError("hwf_estimate_batch: signals live on different grids");
    const double R = p.bump_R;
    const double amin = std::max(p.r_min, p.hwf_scale_min / R);
    std::vector<double> rmax(us.size()), norms(us.size());
    for (std::size_t s = 0; s < us.size(); ++s) rmax[s] = p.resolved_r_max(us[s]), norms[s] = l2_norm(us[s]);
    const double rmax_all = *std::max_element(rmax.begin(), rmax.end());
    std::vector<double> hs;
    for (double h : p.h_ladder())
        if (1.0 / h >= amin * (1 - 1e-9) && (1.0 + R) / h <= rmax_all) hs.push_back(h);

    std::vector<WaveFrontReport> reps;
    for (std::size_t s = 0; s < us.size(); ++s) {
        reps.push_back(make_report(us[s].label, WfMethod::HOMOGENEOUS, dirs, p, rmax[s]));
        reps.back().warnings = us[s].warnings;
    }
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        // rows[h][signal]
        std::vector<std::vector<double>> nrm(hs.size(), std::vector<double>(us.size(), 0.0));
        const SymbolExpr a = SymbolExpr::bump(dirs[j].w, R, p.bump_p);
        for (std::size_t q = 0; q < hs.size(); ++q) {
            const MidpointTable T = build_midpoint_table(dilate(a, hs[q]), 0.5, ax);
            const auto outs = T.apply(us);
            for (std::size_t s = 0; s < us.size(); ++s) nrm[q][s] = l2_norm(outs[s]);
        }
        for (std::size_t s = 0; s < us.size(); ++s) {
            std::vector<double> absc, sups;
            for (std::size_t q = 0; q < hs.size(); ++q)
                if ((1.0 + R) / hs[q] <= rmax[s]) absc.push_back(1.0 / hs[q]), sups.push_back(nrm[q][s]);
            reps[s].fits.push_back(fit_decay(absc, sups, p.hwf_floor_rel * norms[s], p.fit));
        }
    }
    for (auto& r : reps) finish(r);
    return reps;
}

WaveFrontReport hwf_estimate(const SampledSignal& u, const std::vector<Direction>& dirs, const EstimatorParams& p) {
    return hwf_estimate_batch({u}, dirs, p)[0];
}

void AgreementMatrix::merge(const AgreementMatrix& o) {
    pairs.insert(pairs.end(), o.pairs.begin(), o.pairs.end());
    compared += o.compared;
    agreed += o.agreed;
    indeterminate += o.indeterminate;
}

AgreementMatrix compare_reports(const WaveFrontReport& a, const WaveFrontReport& b) {
    if (a.directions.size() != b.directions.size())
        throw ConfigError("compare_reports: direction sets differ (" + std::to_string(a.directions.size()) + " vs " +
                          std::to_string(b.directions.size()) + ")");
    for (std::size_t i = 0; i < a.directions.size(); ++i)
        if (angle_between(a.directions[i].w, b.directions[i].w) > 1e-9)
            throw ConfigError("compare_reports: direction " + std::to_string(i) + " differs");
    AgreementMatrix m;
    for (std::size_t i = 0; i < a.fits.size(); ++i) {
        const DecayClass ca = a.class_at(i), cb = b.class_at(i);
        m.pairs.emplace_back(ca, cb);
        if (ca == DecayClass::INDETERMINATE || cb == DecayClass::INDETERMINATE) {
            ++m.indeterminate;
            continue;
        }
        ++m.compared;
        if (ca == cb) ++m.agreed;
    }
    return m;
}

namespace {

nlohmann::json num(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double unnum(const nlohmann::json& j) {
    if (j.is_null()) return kNaN;
    if (j.is_string()) return j.get<std::string>() == "inf" ? INFINITY : -INFINITY;
    return j.get<double>();
}

}  // namespace

nlohmann::json report_to_json(const WaveFrontReport& r) {
    nlohmann::json j;
    j["signal_id"] = r.signal_id;
    j["method"] = to_string(r.method);
    j["params"] = r.params;
    j["directions"] = nlohmann::json::array();
    for (std::size_t i = 0; i < r.directions.size(); ++i) {
        const auto& f = r.fits[i];
        nlohmann::json sups = nlohmann::json::array();
        for (double s : f.sup_values) sups.push_back(num(s));
        j["directions"].push_back({{"w", r.directions[i].w},
                                   {"theta", r.theta},
                                   {"fit",
                                    {{"abscissae", f.abscissae},
                                     {"sups", sups},
                                     {"floor", f.floor},
                                     {"order", num(f.fitted_order)},
                                     {"r2", f.r_squared}}},
                                   {"class", to_string(f.classification)}});
    }
    j["flagged"] = nlohmann::json::array();
    for (const auto& c : r.flagged.cones) j["flagged"].push_back({{"w", c.w.w}, {"theta", c.theta}});
    j["warnings"] = r.warnings;
    return j;
}

WaveFrontReport report_from_json(const nlohmann::json& j) {
    try {
        WaveFrontReport r;
        r.signal_id = j.at("signal_id").get<std::string>();
        r.method = wf_method_from_string(j.at("method").get<std::string>());
        r.params = j.value("params", nlohmann::json::object());
        for (const auto& d : j.at("directions")) {
            r.directions.emplace_back(d.at("w").get<std::vector<double>>());
            r.theta = d.at("theta").get<double>();
            DecayFit f;
            const auto& fj = d.at("fit");
            f.abscissae = fj.at("abscissae").get<std::vector<double>>();
            for (const auto& s : fj.at("sups")) f.sup_values.push_back(unnum(s));
            f.floor = fj.value("floor", 0.0);
            f.fitted_order = unnum(fj.at("order"));
            f.r_squared = fj.at("r2").get<double>();
            f.classification = decay_class_from_string(d.at("class").get<std::string>());
            r.fits.push_back(f);
        }
        for (const auto& c : j.at("flagged")) r.flagged.add(Direction(c.at("w").get<std::vector<double>>()), c.at("theta").get<double>());
        r.warnings = j.value("warnings", std::vector<std::string>{});
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("report: ") + e.what());
    }
}

std::vector<double> flagged_run_centres(const WaveFrontReport& r) {
    const std::size_t n = r.directions.size();
    std::vector<std::pair<double, bool>> v;
    for (std::size_t i = 0; i < n; ++i) v.emplace_back(r.directions[i].angle(), r.class_at(i) == DecayClass::SLOW);
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    std::size_t start = n;
    for (std::size_t i = 0; i < n; ++i)
        if (!v[i].second) {
            start = i;
            break;
        }
    if (start == n) {
        if (n) out.push_back(kNaN);
        return out;
    }
    // Walk once around the circle starting at an unflagged direction.
    for (std::size_t s = 1; s <= n; ++s) {
        const std::size_t i = (start + s) % n;
        if (!v[i].second) continue;
        std::size_t e = s;
        while (e + 1 <= n && v[(start + e + 1) % n].second) ++e;
        const double a0 = v[i].first;
        double a1 = v[(start + e) % n].first;
        if (a1 < a0) a1 += 2 * kPi;
        double c = 0.5 * (a0 + a1);
        if (c > kPi) c -= 2 * kPi;
        out.push_back(c * 180.0 / kPi);
        s = e;
    }
    return out;
}

}  // namespace wfg
