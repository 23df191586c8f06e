#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "wfg/grid.hpp"
#include "wfg/transforms.hpp"

namespace wfg {

enum class WfMethod { GABOR_CONE, GABOR_LATTICE, HSTFT_LOCAL, HOMOGENEOUS };
const char* to_string(WfMethod m);
WfMethod wf_method_from_string(const std::string& s);

struct EstimatorParams {
    int n_dirs = 32;
    double theta_deg = 4.0;
    double r_min = 4.0;
    double rho = 1.25;
    double r_max = 0.0;          // 0: 0.8 min(L, xi_max), capped by valid_radius
    int x_stride = 2;
    double floor_rel = 1e-12;    // times max |V|
    double hwf_floor_rel = 1e-10;  // times ||u||
    double lattice_alpha = 1.0;
    double lattice_beta = 1.0;
    double U_radius = 0.0;       // 0: sin(theta)
    double h_base = 0.8;
    int h_count = 17;
    double bump_R = 0.15;
    int bump_p = 8;
    double hwf_scale_min = 0.6;  // ladder keeps 1/h >= hwf_scale_min / R_b
    FitParams fit;

    void validate() const;
    double theta() const;
    double resolved_r_max(const SampledSignal& u) const;
    double resolved_U() const;
    std::vector<double> h_ladder() const;
    nlohmann::json to_json() const;
    static EstimatorParams from_json(const nlohmann::json& j);
};

struct WaveFrontReport {
    std::string signal_id;
    WfMethod method = WfMethod::GABOR_CONE;
    std::vector<Direction> directions;
    double theta = 0.0;
    std::vector<DecayFit> fits;
    ConicRegion flagged;
    nlohmann::json params;
    std::vector<std::string> warnings;

    DecayClass class_at(std::size_t i) const { return fits[i].classification; }
    std::vector<std::size_t> flagged_indices() const;
};

// Per-direction sups over cone shells of |V u| (unit-L2 window).
WaveFrontReport gabor_wf(const SampledSignal& u, const std::vector<Direction>& dirs, const EstimatorParams& p);
// Same, from a precomputed STFT field.
WaveFrontReport gabor_wf_from(const PhaseField& V, const std::string& id, const std::vector<Direction>& dirs,
                              const EstimatorParams& p, double r_max);

WaveFrontReport gabor_wf_lattice(const SampledSignal& u, const std::vector<Direction>& dirs, const EstimatorParams& p);

// sup over B(z0, U) of |T_h u| against 1/h.
DecayFit hstft_local(const SampledSignal& u, const Direction& z0, double U_radius, const std::vector<double>& h_ladder,
                     double floor, const FitParams& fit = {});
WaveFrontReport hstft_local_report(const SampledSignal& u, const std::vector<Direction>& dirs, const EstimatorParams& p);
WaveFrontReport hstft_local_from(const PhaseField& V, const std::string& id, const std::vector<Direction>& dirs,
                                 const EstimatorParams& p, double r_max);

// Norms of a_h^w u for a taper bump a centred at each direction.
WaveFrontReport hwf_estimate(const SampledSignal& u, const std::vector<Direction>& dirs, const EstimatorParams& p);
// One sweep for several signals on the same grid (kernels shared).
std::vector<WaveFrontReport> hwf_estimate_batch(const std::vector<SampledSignal>& us,
                                                const std::vector<Direction>& dirs, const EstimatorParams& p);

struct AgreementMatrix {
    std::vector<std::pair<DecayClass, DecayClass>> pairs;
    int compared = 0;
    int agreed = 0;
    int indeterminate = 0;

    double agreement() const { return compared ? double(agreed) / compared : 1.0; }
    double indeterminate_fraction() const { return pairs.empty() ? 0.0 : double(indeterminate) / pairs.size(); }
    void merge(const AgreementMatrix& o);
};

AgreementMatrix compare_reports(const WaveFrontReport& a, const WaveFrontReport& b);

nlohmann::json report_to_json(const WaveFrontReport& r);
WaveFrontReport report_from_json(const nlohmann::json& j);

// Contiguous runs of flagged directions (circular), returned as centre angles in degrees.
std::vector<double> flagged_run_centres(const WaveFrontReport& r);

}  // namespace wfg
