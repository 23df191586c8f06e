#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <limits>
#include <functional>
#include <random>
#include <unistd.h>

#include "wfg/harness.hpp"
#include "wfg/io.hpp"
#include "wfg/synthesis.hpp"

using namespace wfg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("wfg_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d / name;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

RunConfig small_config() {
    return run_config_from_json(nlohmann::json::parse(R"({
        "axis": {"n": 512},
        "signal": {"kind": "GAUSSIAN"},
        "estimator": {"n_dirs": 8},
        "methods": ["gabor", "gabor-lattice", "hstft-local"]
    })"));
}

}  // namespace

TEST_CASE("payload base64 round trip is bit exact") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1e3, 1e3);
    for (std::size_t count : {1u, 2u, 3u, 5u, 64u}) {
        CVec v(count);
        for (auto& c : v) c = {U(rng), U(rng)};
        v[0] = {-0.0, std::numeric_limits<double>::denorm_min()};
        const CVec back = decode_payload(encode_payload(v), count);
        for (std::size_t i = 0; i < count; ++i) {
            CHECK(std::bit_cast<std::uint64_t>(back[i].real()) == std::bit_cast<std::uint64_t>(v[i].real()));
            CHECK(std::bit_cast<std::uint64_t>(back[i].imag()) == std::bit_cast<std::uint64_t>(v[i].imag()));
        }
    }
    CHECK_THROWS_AS(decode_payload(encode_payload(CVec(3)), 4), ConfigError);
    CHECK_THROWS_AS(decode_payload("AAAA*AAA", 1), ConfigError);
    CVec bad{{std::nan(""), 0.0}};
    CHECK_THROWS_AS(decode_payload(encode_payload(bad), 1), ConfigError);
}

TEST_CASE("signal file reload is sample exact") {
    PrescribedSpec sp;
    sp.directions = {Direction::from_degrees(30)};
    sp.K_max = 5;
    sp.axis = AxisSpec(40.0, 1024);
    const auto u = synth_prescribed(sp);
    const auto p = scratch("presc.signal.json");
    save_signal(p, u);
    const auto v = load_signal(p);
    CHECK(v.axis == u.axis);
    CHECK(v.values == u.values);
    CHECK(v.label == u.label);
    CHECK(v.meta == u.meta);
    CHECK(v.boundary_mass == u.boundary_mass);
    for (const auto& e : fs::directory_iterator(p.parent_path()))
        CHECK(e.path().string().find(".tmp.") == std::string::npos);
}

TEST_CASE("corrupt signal files are config errors with diagnostics") {
    const auto p = scratch("bad.signal.json");
    write_text_atomic(p, "{\n  \"format\": \"wfg-signal\",\n  \"d\": 1,\n  oops\n}");
    const auto m1 = message_of([&] { load_signal(p); });
    CHECK(m1.find(":4:") != std::string::npos);
    CHECK_THROWS_AS(load_signal(p), ConfigError);

    auto j = signal_to_json(standard_signal(SignalKind::GAUSSIAN, {}, AxisSpec(10.0, 64)));
    j.erase("n");
    write_text_atomic(p, j.dump());
    CHECK_THROWS_AS(load_signal(p), ConfigError);

    j = signal_to_json(standard_signal(SignalKind::GAUSSIAN, {}, AxisSpec(10.0, 64)));
    j["n"] = 128;
    write_text_atomic(p, j.dump());
    CHECK(message_of([&] { load_signal(p); }).find("payload") != std::string::npos);

    j["n"] = 100;
    write_text_atomic(p, j.dump());
    CHECK_THROWS_AS(load_signal(p), ConfigError);

    j = signal_to_json(standard_signal(SignalKind::GAUSSIAN, {}, AxisSpec(10.0, 64)));
    j["L"] = "ten";
    write_text_atomic(p, j.dump());
    CHECK(message_of([&] { load_signal(p); }).find("/L") != std::string::npos);
    CHECK_THROWS_AS(load_signal(scratch("missing.json")), ConfigError);
}

TEST_CASE("report csv has one row per direction and abscissa") {
    const auto u = standard_signal(SignalKind::GAUSSIAN, {}, AxisSpec::balanced(512));
    const auto r = gabor_wf(u, uniform_directions(8), {});
    const std::string csv = report_csv(r);
    CHECK(csv.rfind("direction_deg,abscissa,sup,fitted_order,class\n", 0) == 0);
    std::size_t rows = 0;
    for (const auto& f : r.fits) rows += std::max<std::size_t>(1, f.abscissae.size());
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == rows + 1);
}

TEST_CASE("run config defaults, round trip and field diagnostics") {
    const auto c = run_config_from_json(nlohmann::json::parse(R"({"axis": {"n": 1024}})"));
    CHECK(c.signal_kind == "CORPUS");
    CHECK(c.estimator.n_dirs == 32);
    CHECK(c.axis().L == doctest::Approx(std::sqrt(kPi * 1024 / 2)));
    const auto j = run_config_to_json(c);
    CHECK(run_config_to_json(run_config_from_json(j)) == j);

    auto bad = [](const char* text) { return message_of([&] { run_config_from_json(nlohmann::json::parse(text)); }); };
    CHECK(bad(R"({"axis": {"n": 1024}, "estimator": {"theta": 4}})").find("/estimator") != std::string::npos);
    CHECK(bad(R"({"axis": {"n": 1024}, "estimator": {"theta_deg": 95}})").find("/estimator/theta_deg") != std::string::npos);
    CHECK(bad(R"({"axis": {"n": 1000}})").find("axis") != std::string::npos);
    CHECK(bad(R"({"axis": {"n": 1024}, "methods": ["magic"]})").find("/methods/0") != std::string::npos);
    CHECK(bad(R"({"axis": {"n": 1024}, "word": [{"rotate": 1}]})").find("/word/0") != std::string::npos);
    CHECK(bad(R"({})").find("axis") == std::string::npos);  // missing required: reported at the root
    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({})")), ConfigError);
    CHECK_THROWS_AS(run_config_from_json(nlohmann::json::parse(R"({"axis": {"n": 1024}, "signal": {"kind": "PRESCRIBED", "K_max": 1}})")),
                    ConfigError);

    const auto p = scratch("cfg.json");
    write_text_atomic(p, "{\"axis\": {\"n\": 1024},\n \"seed\": -1}");
    CHECK(message_of([&] { load_run_config(p); }).find("/seed") != std::string::npos);
}

TEST_CASE("synthesize from configs") {
    auto cfg = [](const char* text) { return run_config_from_json(nlohmann::json::parse(text)); };
    const auto empty = synthesize(cfg(R"({"axis": {"n": 512}, "signal": {"kind": "PRESCRIBED"}})"));
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].max_abs() == 0.0);
    CHECK_FALSE(empty[0].warnings.empty());
    CHECK_THROWS_AS(synthesize(cfg(R"({"axis": {"n": 512}, "signal": {"kind": "PRESCRIBED", "directions_deg": [30], "K_max": 12}})")),
                    OutOfBox);
    const char* rnd = R"({"axis": {"n": 512}, "signal": {"kind": "PRESCRIBED", "random_directions": 3}, "seed": 11})";
    CHECK(synthesize(cfg(rnd))[0].values == synthesize(cfg(rnd))[0].values);
    CHECK(synthesize(cfg(R"({"axis": {"n": 512}})")).size() == 6);
    const auto f = synthesize(cfg(R"({"axis": {"n": 512}, "signal": {"kind": "GAUSSIAN"}, "word": ["fourier"]})"));
    CHECK(f[0].label.find("fourier") != std::string::npos);
}

TEST_CASE("analysis is deterministic and bundles round trip") {
    const RunConfig c = small_config();
    const auto sig = synthesize(c);
    const auto a = analyze(sig, c, resolve_methods(c.methods));
    const auto b = analyze(sig, c, resolve_methods(c.methods));
    CHECK(canonical_dump(a) == canonical_dump(b));
    CHECK(a.reports.size() == 3);
    CHECK(a.agreements.size() == 2);
    for (const auto& r : a.reports) CHECK(r.flagged.empty());

    validate_json(bundle_to_json(a), "bundle.schema.json", "bundle");
    for (const auto& r : a.reports) validate_json(report_to_json(r), "report.schema.json", "report");
    const auto p = scratch("a.bundle.json");
    save_bundle(p, a);
    const auto back = load_bundle(p);
    CHECK(canonical_dump(back) == canonical_dump(a));
    CHECK(back.timing == a.timing);

    auto broken = bundle_to_json(a);
    broken["reports"][1]["method"] = "GUESS";
    CHECK(message_of([&] { bundle_from_json(broken); }).find("/reports/1/method") != std::string::npos);

    const auto self = compare_bundles(a, back);
    CHECK(total(self).agreement() == 1.0);
    const std::string csv = agreement_csv(self);
    CHECK(csv.find("# summary") != std::string::npos);
    CHECK(csv.find("agreement=1") != std::string::npos);
}

TEST_CASE("bundle comparison rejects mismatched direction sets") {
    RunConfig c = small_config();
    const auto sig = synthesize(c);
    const auto a = analyze(sig, c, {WfMethod::GABOR_CONE});
    c.estimator.n_dirs = 16;
    const auto b = analyze(sig, c, {WfMethod::GABOR_CONE});
    CHECK_THROWS_AS(compare_bundles(a, b), ConfigError);
    ResultBundle none;
    CHECK_THROWS_AS(compare_bundles(none, a), ConfigError);
}

TEST_CASE("method names") {
    CHECK(resolve_methods({"all"}).size() == 4);
    CHECK(resolve_methods({"hwf", "gabor", "hwf"}) == std::vector<WfMethod>{WfMethod::HOMOGENEOUS, WfMethod::GABOR_CONE});
    CHECK_THROWS_AS(resolve_methods({"fast"}), ConfigError);
    CHECK_THROWS_AS(resolve_methods({}), ConfigError);
}
