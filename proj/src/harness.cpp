#include "wfg/harness.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "wfg/io.hpp"
#include "wfg/synthesis.hpp"
#include "wfg/transforms.hpp"

namespace wfg {

AxisSpec RunConfig::axis() const { return L > 0 ? AxisSpec(L, n, 1) : AxisSpec::balanced(n, 1); }

double RunConfig::analysis_radius() const {
    const AxisSpec ax = axis();
    const double reach = std::min(ax.L, ax.xi_max());
    return estimator.r_max > 0 ? std::min(estimator.r_max, reach) : 0.8 * reach;
}

RunConfig run_config_from_json(const nlohmann::json& j, const std::string& source) {
    validate_json(j, "run_config.schema.json", source);
    RunConfig c;
    const auto& ax = j["axis"];
    c.n = ax["n"].get<int>();
    c.L = ax.value("L", 0.0);
    try {
        c.axis();
    } catch (const GridError& e) {
        throw ConfigError(source + ": axis: " + e.what());
    }
    if (j.contains("signal")) {
        const auto& s = j["signal"];
        c.signal_kind = s["kind"].get<std::string>();
        if (s.contains("params")) c.params = s["params"].get<std::map<std::string, double>>();
        c.directions_deg = s.value("directions_deg", std::vector<double>{});
        c.random_directions = s.value("random_directions", 0);
        c.J_max = s.value("J_max", 0);
        c.K_max = s.value("K_max", 0);
        if (c.K_max == 1) throw ConfigError(source + ": field /signal/K_max must be 0 (auto) or >= 2");
    }
    if (j.contains("word")) c.word = word_from_json(j["word"]);
    if (j.value("dilate_policy", std::string("keep_axis")) == "rescale_axis") c.dilate_policy = DilatePolicy::RESCALE_AXIS;
    if (j.contains("estimator")) c.estimator = EstimatorParams::from_json(j["estimator"]);
    if (j.contains("methods")) c.methods = j["methods"].get<std::vector<std::string>>();
    c.out_dir = j.value("out_dir", c.out_dir);
    c.seed = j.value("seed", std::uint64_t{0});
    return c;
}

RunConfig load_run_config(const std::filesystem::path& p) {
    return run_config_from_json(parse_validated(read_text(p), "run_config.schema.json", p.string()), p.string());
}

nlohmann::json run_config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["axis"] = {{"n", c.n}};
    if (c.L > 0) j["axis"]["L"] = c.L;
    j["signal"] = {{"kind", c.signal_kind},
                   {"params", c.params},
                   {"directions_deg", c.directions_deg},
                   {"random_directions", c.random_directions},
                   {"J_max", c.J_max},
                   {"K_max", c.K_max}};
    if (c.word) j["word"] = word_to_json(*c.word);
    j["dilate_policy"] = c.dilate_policy == DilatePolicy::RESCALE_AXIS ? "rescale_axis" : "keep_axis";
    j["estimator"] = c.estimator.to_json();
    j["methods"] = c.methods;
    j["out_dir"] = c.out_dir;
    j["seed"] = c.seed;
    return j;
}

std::vector<SampledSignal> synthesize(const RunConfig& c) {
    const AxisSpec ax = c.axis();
    std::vector<SampledSignal> out;
    if (c.signal_kind == "CORPUS") {
        for (auto& e : corpus(ax, c.analysis_radius())) out.push_back(std::move(e.u));
    } else if (c.signal_kind == "PRESCRIBED") {
        PrescribedSpec sp;
        sp.axis = ax;
        for (double d : c.directions_deg) sp.directions.push_back(Direction::from_degrees(d));
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> U(0.0, 360.0);
        for (int i = 0; i < c.random_directions; ++i) sp.directions.push_back(Direction::from_degrees(U(rng)));
        sp.J_max = c.J_max > 0 ? c.J_max : std::max<int>(1, sp.directions.size());
        sp.K_max = c.K_max > 0 ? c.K_max : prescribed_K_for(c.analysis_radius());
        const double reach = std::min(ax.L, ax.xi_max());
        if (c.K_max > 0 && !sp.directions.empty() && sp.valid_radius() > reach)
            throw OutOfBox("prescribed: K_max = " + std::to_string(c.K_max) + " puts valid_radius " +
                           format_double(sp.valid_radius()) + " beyond the grid reach " + format_double(reach));
        out.push_back(synth_prescribed(sp));
    } else {
        out.push_back(standard_signal(signal_kind_from_string(c.signal_kind), c.params, ax));
    }
    if (c.word)
        for (auto& u : out) {
            const std::string label = u.label;
            u = apply_unitary(*c.word, u, c.dilate_policy);
            u.label = label + "@" + word_to_json(*c.word).dump();
        }
    return out;
}

std::vector<WfMethod> resolve_methods(const std::vector<std::string>& names) {
    std::vector<WfMethod> out;
    auto add = [&](WfMethod m) {
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    };
    for (const auto& n : names) {
        if (n == "all") {
            for (auto m : {WfMethod::GABOR_CONE, WfMethod::GABOR_LATTICE, WfMethod::HSTFT_LOCAL, WfMethod::HOMOGENEOUS}) add(m);
        } else {
            add(wf_method_from_string(n));
        }
    }
    if (out.empty()) throw ConfigError("no estimator method selected");
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <class F>
WaveFrontReport with_context(const SampledSignal& u, WfMethod m, F f) {
    try {
        return f();
    } catch (const EstimatorError& e) {
        throw EstimatorError(std::string(to_string(m)) + " on '" + u.label + "': " + e.what());
    }
}

}  // namespace

ResultBundle analyze(const std::vector<SampledSignal>& signals, const RunConfig& c, const std::vector<WfMethod>& methods) {
    const EstimatorParams& p = c.estimator;
    p.validate();
    const auto dirs = uniform_directions(p.n_dirs);
    auto has = [&](WfMethod m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };

    ResultBundle b;
    b.config = run_config_to_json(c);
    std::map<WfMethod, std::vector<WaveFrontReport>> by;

    if (has(WfMethod::GABOR_CONE) || has(WfMethod::HSTFT_LOCAL)) {
        for (const auto& u : signals) {
            auto t0 = Clock::now();
            PhaseGridSpec pg;
            pg.x_stride = p.x_stride;
            const PhaseField V = stft(u, GaussWindow{}, pg);
            const double r = p.resolved_r_max(u);
            b.timing["stft"] += since(t0);
            if (has(WfMethod::GABOR_CONE)) {
                t0 = Clock::now();
                auto rep = with_context(u, WfMethod::GABOR_CONE, [&] { return gabor_wf_from(V, u.label, dirs, p, r); });
                rep.warnings = u.warnings;
                by[WfMethod::GABOR_CONE].push_back(std::move(rep));
                b.timing["GABOR_CONE"] += since(t0);
            }
            if (has(WfMethod::HSTFT_LOCAL)) {
                t0 = Clock::now();
                auto rep = with_context(u, WfMethod::HSTFT_LOCAL, [&] { return hstft_local_from(V, u.label, dirs, p, r); });
                rep.warnings = u.warnings;
                by[WfMethod::HSTFT_LOCAL].push_back(std::move(rep));
                b.timing["HSTFT_LOCAL"] += since(t0);
            }
        }
    }
    if (has(WfMethod::GABOR_LATTICE)) {
        const auto t0 = Clock::now();
        for (const auto& u : signals)
            by[WfMethod::GABOR_LATTICE].push_back(
                with_context(u, WfMethod::GABOR_LATTICE, [&] { return gabor_wf_lattice(u, dirs, p); }));
        b.timing["GABOR_LATTICE"] += since(t0);
    }
    if (has(WfMethod::HOMOGENEOUS)) {
        const auto t0 = Clock::now();
        // Signals on the same grid share their kernel tables.
        std::vector<WaveFrontReport> reps(signals.size());
        std::vector<bool> done(signals.size(), false);
        for (std::size_t i = 0; i < signals.size(); ++i) {
            if (done[i]) continue;
            std::vector<std::size_t> group;
            std::vector<SampledSignal> us;
            for (std::size_t k = i; k < signals.size(); ++k)
                if (!done[k] && signals[k].axis == signals[i].axis) group.push_back(k), us.push_back(signals[k]), done[k] = true;
            std::vector<WaveFrontReport> out;
            try {
                out = hwf_estimate_batch(us, dirs, p);
            } catch (const EstimatorError& e) {
                throw EstimatorError(std::string("HOMOGENEOUS: ") + e.what());
            }
            for (std::size_t q = 0; q < group.size(); ++q) reps[group[q]] = std::move(out[q]);
        }
        by[WfMethod::HOMOGENEOUS] = std::move(reps);
        b.timing["HOMOGENEOUS"] += since(t0);
    }

    for (std::size_t s = 0; s < signals.size(); ++s)
        for (auto m : methods) b.reports.push_back(by[m][s]);
    if (has(WfMethod::GABOR_CONE))
        for (std::size_t s = 0; s < signals.size(); ++s)
            for (auto m : methods) {
                if (m == WfMethod::GABOR_CONE) continue;
                AgreementRecord r;
                r.signal_id = signals[s].label;
                r.a = WfMethod::GABOR_CONE;
                r.b = m;
                for (const auto& d : dirs) r.direction_deg.push_back(d.degrees());
                r.m = compare_reports(by[WfMethod::GABOR_CONE][s], by[m][s]);
                b.agreements.push_back(std::move(r));
            }
    return b;
}

namespace {

nlohmann::json agreement_to_json(const AgreementRecord& r) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [x, y] : r.m.pairs) pairs.push_back({to_string(x), to_string(y)});
    return {{"signal_id", r.signal_id},
            {"method_a", to_string(r.a)},
            {"method_b", to_string(r.b)},
            {"compared", r.m.compared},
            {"agreed", r.m.agreed},
            {"indeterminate", r.m.indeterminate},
            {"agreement", r.m.agreement()},
            {"pairs", pairs}};
}

AgreementRecord agreement_from_json(const nlohmann::json& j) {
    AgreementRecord r;
    r.signal_id = j.at("signal_id").get<std::string>();
    r.a = wf_method_from_string(j.at("method_a").get<std::string>());
    r.b = wf_method_from_string(j.at("method_b").get<std::string>());
    r.m.compared = j.at("compared").get<int>();
    r.m.agreed = j.at("agreed").get<int>();
    r.m.indeterminate = j.at("indeterminate").get<int>();
    for (const auto& p : j.at("pairs"))
        r.m.pairs.emplace_back(decay_class_from_string(p[0].get<std::string>()), decay_class_from_string(p[1].get<std::string>()));
    return r;
}

}  // namespace

nlohmann::json bundle_to_json(const ResultBundle& b, bool with_timing) {
    nlohmann::json j;
    j["tool"] = "wfg";
    j["version"] = b.version;
    j["config"] = b.config;
    j["reports"] = nlohmann::json::array();
    for (const auto& r : b.reports) j["reports"].push_back(report_to_json(r));
    j["agreements"] = nlohmann::json::array();
    for (const auto& a : b.agreements) j["agreements"].push_back(agreement_to_json(a));
    if (with_timing) j["timing"] = b.timing;
    return j;
}

ResultBundle bundle_from_json(const nlohmann::json& j) {
    validate_json(j, "bundle.schema.json", "bundle");
    ResultBundle b;
    b.version = j["version"].get<std::string>();
    b.config = j["config"];
    for (const auto& r : j["reports"]) b.reports.push_back(report_from_json(r));
    try {
        for (const auto& a : j["agreements"]) b.agreements.push_back(agreement_from_json(a));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bundle: ") + e.what());
    }
    if (j.contains("timing")) b.timing = j["timing"].get<std::map<std::string, double>>();
    return b;
}

std::string canonical_dump(const ResultBundle& b) { return bundle_to_json(b, false).dump(1) + "\n"; }

void save_bundle(const std::filesystem::path& p, const ResultBundle& b) {
    write_text_atomic(p, bundle_to_json(b, true).dump(1) + "\n");
}

ResultBundle load_bundle(const std::filesystem::path& p) {
    return bundle_from_json(parse_validated(read_text(p), "bundle.schema.json", p.string()));
}

std::vector<AgreementRecord> compare_bundles(const ResultBundle& A, const ResultBundle& B) {
    auto group = [](const ResultBundle& X) {
        std::vector<std::pair<std::string, std::vector<const WaveFrontReport*>>> g;
        for (const auto& r : X.reports) {
            auto it = std::find_if(g.begin(), g.end(), [&](const auto& e) { return e.first == r.signal_id; });
            if (it == g.end()) g.push_back({r.signal_id, {&r}});
            else it->second.push_back(&r);
        }
        return g;
    };
    const auto ga = group(A), gb = group(B);
    if (ga.empty()) throw ConfigError("compare: first bundle has no reports");
    std::vector<AgreementRecord> out;
    for (const auto& [id, ra] : ga) {
        auto it = std::find_if(gb.begin(), gb.end(), [&](const auto& e) { return e.first == id; });
        if (it == gb.end()) throw ConfigError("compare: signal '" + id + "' is missing from the second bundle");
        if (it->second.size() != ra.size())
            throw ConfigError("compare: signal '" + id + "' has " + std::to_string(ra.size()) + " vs " +
                              std::to_string(it->second.size()) + " reports");
        for (std::size_t k = 0; k < ra.size(); ++k) {
            AgreementRecord r;
            r.signal_id = id;
            r.a = ra[k]->method;
            r.b = it->second[k]->method;
            r.m = compare_reports(*ra[k], *it->second[k]);
            for (const auto& d : ra[k]->directions) r.direction_deg.push_back(d.w.size() == 2 ? d.degrees() : NAN);
            out.push_back(std::move(r));
        }
    }
    return out;
}

AgreementMatrix total(const std::vector<AgreementRecord>& recs) {
    AgreementMatrix t;
    for (const auto& r : recs) t.merge(r.m);
    return t;
}

std::string agreement_csv(const std::vector<AgreementRecord>& recs) {
    std::string out = "signal_id,method_a,method_b,direction_deg,class_a,class_b\n";
    for (const auto& r : recs)
        for (std::size_t i = 0; i < r.m.pairs.size(); ++i)
            out += r.signal_id + "," + to_string(r.a) + "," + to_string(r.b) + "," +
                   format_double(i < r.direction_deg.size() ? r.direction_deg[i] : NAN) + "," +
                   to_string(r.m.pairs[i].first) + "," + to_string(r.m.pairs[i].second) + "\n";
    const AgreementMatrix t = total(recs);
    out += "# summary compared=" + std::to_string(t.compared) + " agreed=" + std::to_string(t.agreed) +
           " indeterminate=" + std::to_string(t.indeterminate) + " agreement=" + format_double(t.agreement()) + "\n";
    return out;
}

}  // namespace wfg
