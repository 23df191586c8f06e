#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wfg/acceptance.hpp"
#include "wfg/harness.hpp"
#include "wfg/io.hpp"

namespace fs = std::filesystem;
using namespace wfg;

namespace {

std::string file_stem(const std::string& label) {
    std::string s;
    for (char c : label) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
    return s.empty() ? "signal" : s;
}

RunConfig config_from(const std::string& path) { return path.empty() ? RunConfig{} : load_run_config(path); }

void set_threads(int flag) {
    int k = flag;
    if (k == 0)
        if (const char* env = std::getenv("WFG_THREADS"); env && *env) {
            char* end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (*end || v < 1) throw ConfigError("WFG_THREADS must be a positive integer, got '" + std::string(env) + "'");
            k = static_cast<int>(v);
        }
    if (k > 0) omp_set_num_threads(k);
}

int cmd_synth(const std::string& config, std::string out) {
    const RunConfig c = config_from(config);
    if (out.empty()) out = c.out_dir;
    const auto signals = synthesize(c);
    fs::create_directories(out);
    for (const auto& u : signals) {
        const fs::path p = fs::path(out) / (file_stem(u.label) + ".signal.json");
        save_signal(p, u);
        std::cout << p.string() << "  n=" << u.axis.n << " L=" << format_double(u.axis.L);
        for (const auto& w : u.warnings) std::cout << "\n  warning: " << w;
        std::cout << "\n";
    }
    return 0;
}

int cmd_analyze(const std::vector<std::string>& files, const std::string& config, const std::string& method, std::string out) {
    RunConfig c = config_from(config);
    if (!method.empty()) c.methods = {method};
    if (out.empty()) out = c.out_dir;
    std::vector<SampledSignal> signals;
    if (files.empty()) {
        signals = synthesize(c);
    } else {
        for (const auto& f : files) signals.push_back(load_signal(f));
    }
    const ResultBundle b = analyze(signals, c, resolve_methods(c.methods));
    fs::create_directories(out);
    save_bundle(fs::path(out) / "bundle.json", b);
    for (const auto& r : b.reports) {
        write_text_atomic(fs::path(out) / (file_stem(r.signal_id) + "." + to_string(r.method) + ".csv"), report_csv(r));
        std::cout << r.signal_id << " " << to_string(r.method) << ": " << r.flagged_indices().size() << "/"
                  << r.directions.size() << " flagged";
        const auto runs = flagged_run_centres(r);
        if (!runs.empty()) {
            std::cout << ", runs at";
            for (double d : runs) {
                char buf[32];
                std::snprintf(buf, sizeof buf, " %.2f", d);
                std::cout << buf;
            }
        }
        std::cout << "\n";
    }
    if (!b.agreements.empty()) {
        const AgreementMatrix m = total(b.agreements);
        std::cout << "agreement vs GABOR_CONE " << format_double(m.agreement()) << " over " << m.compared << " pairs\n";
    }
    std::cout << "wrote " << (fs::path(out) / "bundle.json").string() << "\n";
    return 0;
}

int cmd_compare(const std::string& a, const std::string& b, std::string out) {
    if (out.empty()) out = ".";
    const auto recs = compare_bundles(load_bundle(a), load_bundle(b));
    fs::create_directories(out);
    const fs::path p = fs::path(out) / "agreement.csv";
    write_text_atomic(p, agreement_csv(recs));
    const AgreementMatrix m = total(recs);
    std::cout << "compared " << m.compared << " agreed " << m.agreed << " indeterminate " << m.indeterminate
              << " agreement " << format_double(m.agreement()) << "\nwrote " << p.string() << "\n";
    return 0;
}

int cmd_selftest(const std::vector<int>& only) {
    AcceptanceOptions opt;
    opt.only.insert(only.begin(), only.end());
    for (const auto& r : run_acceptance(std::cout, opt))
        if (!r.pass) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gabor and homogeneous wave front set estimation", "wfg"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads (default: WFG_THREADS, else the OpenMP default)")
        ->check(CLI::PositiveNumber);
    std::string config, out, method;
    std::vector<std::string> files;
    std::string bundle_a, bundle_b;
    std::vector<int> only;

    auto* synth = app.add_subcommand("synth", "write signals described by a run config");
    synth->add_option("--config", config, "run config JSON")->check(CLI::ExistingFile);
    synth->add_option("--out", out, "output directory (default: config out_dir)");

    auto* an = app.add_subcommand("analyze", "estimate wave front sets; writes bundle.json and per-report CSVs");
    an->add_option("signals", files, "signal files (default: synthesize from the config)")->check(CLI::ExistingFile);
    an->add_option("--config", config, "run config JSON")->check(CLI::ExistingFile);
    an->add_option("--method", method, "gabor | gabor-lattice | hstft-local | hwf | all");
    an->add_option("--out", out, "output directory (default: config out_dir)");

    auto* cmp = app.add_subcommand("compare", "agreement between two result bundles");
    cmp->add_option("a", bundle_a, "first bundle")->required()->check(CLI::ExistingFile);
    cmp->add_option("b", bundle_b, "second bundle")->required()->check(CLI::ExistingFile);
    cmp->add_option("--out", out, "directory for agreement.csv (default: .)");

    auto* self = app.add_subcommand("selftest", "run the acceptance criteria");
    self->add_option("criteria", only, "criterion numbers (default: all)")->check(CLI::Range(1, 9));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        set_threads(threads);
        if (*synth) return cmd_synth(config, out);
        if (*an) return cmd_analyze(files, config, method, out);
        if (*cmp) return cmd_compare(bundle_a, bundle_b, out);
        return cmd_selftest(only);
    } catch (const Error& e) {
        std::cerr << "wfg: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "wfg: " << e.what() << "\n";
        return 1;
    }
}
