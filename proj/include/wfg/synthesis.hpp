#pragma once

#include <string>
#include <vector>

#include "wfg/grid.hpp"

namespace wfg {

// Truncated prescribed-wave-front distribution:
// u = sum_{j < J_max} 2^{-j} sum_{1 <= k <= K_max} f_k(.; w_j).
// Terms centred less than 8.6 inside the phase-space box are dropped; meta "valid_radius"
// is then computed from K_kept, the largest k present in every direction.
struct PrescribedSpec {
    std::vector<Direction> directions;
    int J_max = 1;
    int K_max = 2;
    AxisSpec axis;

    void validate() const;
    double valid_radius() const { return 0.8 * (K_max - 1.0) * (K_max - 1.0); }
};

// Smallest K with K^2 >= 1.25 r_max and 0.8 (K - 1)^2 >= r_max.
int prescribed_K_for(double r_max);

struct CoherentStateSpec {
    std::vector<double> x0;
    std::vector<double> xi0;
    double h = 1.0;
};

// f_k(x) = exp(-|x - k^2 y|^2 / 2 + i k^2 x.eta); y, eta have size d.
SampledSignal synth_fk(const std::vector<double>& y, const std::vector<double>& eta, int k, const AxisSpec& axis);

SampledSignal synth_prescribed(const PrescribedSpec& spec);

// phi(y - x0/h) e^{i y.xi0/h} with phi(y) = e^{-|y|^2/2}.
SampledSignal coherent_state(const CoherentStateSpec& spec, const AxisSpec& axis);

enum class SignalKind { GAUSSIAN, HERMITE, CHIRP, PLANE_WAVE, NARROW_GAUSS, PRESCRIBED };
SignalKind signal_kind_from_string(const std::string& s);
const char* to_string(SignalKind k);

// Parameters per kind: HERMITE "n"; CHIRP "c"; PLANE_WAVE "xi0"; NARROW_GAUSS "sigma"
// (default 4 dx). Non-decaying kinds carry the boundary mass flag.
SampledSignal standard_signal(SignalKind kind, const std::map<std::string, double>& params, const AxisSpec& axis);

struct CorpusEntry {
    std::string name;
    SampledSignal u;
    bool decaying = true;
};

// gauss, herm3, chirp, plane, narrow, presc (one direction at presc_deg).
std::vector<CorpusEntry> corpus(const AxisSpec& axis, double r_max, double presc_deg = 30.0);

}  // namespace wfg
