#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wfg/metaplectic.hpp"
#include "wfg/wavefront.hpp"

namespace wfg {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunConfig {
    int n = 4096;
    double L = 0.0;  // 0: balanced, L = sqrt(pi n / 2)
    std::string signal_kind = "CORPUS";
    std::map<std::string, double> params;
    std::vector<double> directions_deg;
    int random_directions = 0;
    int J_max = 0;  // 0: number of directions
    int K_max = 0;  // 0: prescribed_K_for(r_max)
    std::optional<SymplecticWord> word;
    DilatePolicy dilate_policy = DilatePolicy::KEEP_AXIS;
    EstimatorParams estimator;
    std::vector<std::string> methods{"all"};
    std::string out_dir = "wfg-out";
    std::uint64_t seed = 0;

    AxisSpec axis() const;
    // r_max the estimator would use on a non-prescribed signal of this grid.
    double analysis_radius() const;
};

RunConfig run_config_from_json(const nlohmann::json& j, const std::string& source = "config");
RunConfig load_run_config(const std::filesystem::path& p);
// Every field spelled out, defaults included.
nlohmann::json run_config_to_json(const RunConfig& c);

std::vector<SampledSignal> synthesize(const RunConfig& c);

// Expands "all" and removes duplicates, keeping order.
std::vector<WfMethod> resolve_methods(const std::vector<std::string>& names);

struct AgreementRecord {
    std::string signal_id;
    WfMethod a = WfMethod::GABOR_CONE;
    WfMethod b = WfMethod::HOMOGENEOUS;
    std::vector<double> direction_deg;
    AgreementMatrix m;
};

struct ResultBundle {
    nlohmann::json config = nlohmann::json::object();
    std::vector<WaveFrontReport> reports;
    std::vector<AgreementRecord> agreements;
    std::map<std::string, double> timing;  // seconds
    std::string version = kToolVersion;
};

// Runs each method on every signal; with GABOR_CONE among the methods, the other
// methods are compared against it per signal.
ResultBundle analyze(const std::vector<SampledSignal>& signals, const RunConfig& c, const std::vector<WfMethod>& methods);

nlohmann::json bundle_to_json(const ResultBundle& b, bool with_timing = true);
ResultBundle bundle_from_json(const nlohmann::json& j);
// Deterministic text: timing dropped, keys sorted.
std::string canonical_dump(const ResultBundle& b);
void save_bundle(const std::filesystem::path& p, const ResultBundle& b);
ResultBundle load_bundle(const std::filesystem::path& p);

// Reports paired by signal_id, in order of appearance within each signal.
std::vector<AgreementRecord> compare_bundles(const ResultBundle& A, const ResultBundle& B);
// One row per direction pair, then a summary row.
std::string agreement_csv(const std::vector<AgreementRecord>& recs);
AgreementMatrix total(const std::vector<AgreementRecord>& recs);

}  // namespace wfg
