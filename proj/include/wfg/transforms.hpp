#pragma once

#include <array>
#include <string>
#include <vector>

#include "wfg/grid.hpp"

namespace wfg {

enum class WindowNorm { UNIT_L2, PLAIN, PEAK_UNIT };

// c * exp(-|y|^2/2) with c = pi^{-d/4} (UNIT_L2), 1 (PLAIN) or pi^{-d/2} (PEAK_UNIT).
struct GaussWindow {
    WindowNorm norm = WindowNorm::UNIT_L2;
    int d = 1;

    double scale() const;
    double operator()(double y) const;
    std::string id() const;
};

enum class FieldKind { STFT, HSTFT, WIGNER };

// Phase grid: x = xs[i], xi = xis[k], values[i * xis.size() + k].
struct PhaseField {
    AxisSpec axis;
    std::vector<double> xs;
    std::vector<double> xis;
    CVec values;
    FieldKind kind = FieldKind::STFT;
    double h = 1.0;
    std::string window_id;

    cplx at(std::size_t i, std::size_t k) const { return values[i * xis.size() + k]; }
    double dx() const;
    double dxi() const;
    double l2_norm() const;
};

// Strides select every x_stride-th x sample and xi_stride-th frequency.
// x_margin extends the x range beyond the box (the STFT of the box-truncated
// signal is nonzero there); needed for exact Moyal sums of non-decaying signals.
struct PhaseGridSpec {
    int x_stride = 1;
    int xi_stride = 1;
    double x_margin = 0.0;
};

SampledSignal fourier(const SampledSignal& u);
SampledSignal inverse_fourier(const SampledSignal& uhat, const AxisSpec& target);

PhaseField stft(const SampledSignal& u, const GaussWindow& w, const PhaseGridSpec& pg = {});
PhaseField stft_serial(const SampledSignal& u, const GaussWindow& w, const PhaseGridSpec& pg = {});
// Direct quadrature at arbitrary phase points (x, xi).
CVec stft_at(const SampledSignal& u, const GaussWindow& w,
             const std::vector<std::array<double, 2>>& pts);

// Bounding box for hSTFT output in (x, xi); empty box means the full dilated grid.
struct HRegion {
    double x_max = 0.0;
    double xi_max = 0.0;
    int x_stride = 1;
};

PhaseField hstft(const SampledSignal& u, double h, const HRegion& region = {});
// T_h u from an existing UNIT_L2 STFT of u (no recomputation).
PhaseField hstft_from(const PhaseField& V, double h);

PhaseField wigner(const SampledSignal& f, const SampledSignal& g, int x_stride = 1);

struct Reconstruction {
    SampledSignal u;
    double rel_error = -1.0;
};

SampledSignal moyal_reconstruct(const PhaseField& F, const GaussWindow& w);
Reconstruction moyal_reconstruct(const PhaseField& F, const GaussWindow& w, const SampledSignal& source);

// Spectral derivative D^m u with D = -i d/dx (d = 1); Nyquist mode dropped for odd m.
SampledSignal spectral_D(const SampledSignal& u, int m);

// Bandlimited values of u at arbitrary points; zero outside the box.
CVec bandlimited_eval(const SampledSignal& u, const std::vector<double>& pts);

// Resample u onto a (typically larger) grid: zero padding in x and/or in frequency.
SampledSignal resample(const SampledSignal& u, const AxisSpec& target);

}  // namespace wfg
