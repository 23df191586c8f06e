#pragma once

#include <cmath>

#include <array>
#include <complex>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "wfg/errors.hpp"

namespace wfg {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kBoundaryEps = 1e-8;

// Uniform grid x_j = -L + j*dx, dx = 2L/n, on each of d axes.
// The dual grid is xi_k = (k - n/2) * pi/L.
struct AxisSpec {
    double L = 20.0;
    int n = 1024;
    int d = 1;

    AxisSpec() = default;
    AxisSpec(double L_, int n_, int d_ = 1);

    // L chosen so that L = xi_max.
    static AxisSpec balanced(int n, int d = 1);

    void validate() const;
    double dx() const { return 2.0 * L / n; }
    double dxi() const { return kPi / L; }
    double xi_max() const { return kPi * n / (2.0 * L); }
    double x(int j) const { return -L + j * dx(); }
    double xi(int k) const { return (k - n / 2) * dxi(); }
    std::size_t size() const;
    // Axis on which fourier() returns its samples.
    AxisSpec dual() const { return AxisSpec(xi_max(), n, d); }
    // L to 1e-12 relative: a balanced grid and its dual compare equal.
    bool operator==(const AxisSpec& o) const {
        return n == o.n && d == o.d && std::abs(L - o.L) <= 1e-12 * L;
    }
};

struct SampledSignal {
    AxisSpec axis;
    CVec values;
    std::string label;
    double boundary_mass = 0.0;
    std::map<std::string, double> meta;
    std::vector<std::string> warnings;

    SampledSignal() = default;
    SampledSignal(const AxisSpec& a, CVec v, std::string lbl = "");

    // Recompute boundary_mass from the edge samples.
    void refresh();
    double max_abs() const;
    bool aliased() const { return boundary_mass > kBoundaryEps * max_abs(); }
};

// Unit vector in R^{2d}; for d = 1 the phase plane (x, xi).
struct Direction {
    std::vector<double> w;

    Direction() = default;
    explicit Direction(std::vector<double> v);
    static Direction normalized(std::vector<double> v);
    static Direction from_degrees(double deg);
    double angle() const;  // d = 1 only, in (-pi, pi]
    double degrees() const;
};

std::vector<Direction> uniform_directions(int count);

// Angle between two nonzero vectors of the same length.
double angle_between(const std::vector<double>& a, const std::vector<double>& b);
// Circular distance between two angles (radians).
double angular_distance(double a, double b);

struct Cone {
    Direction w;
    double theta;
};

struct ConicRegion {
    std::vector<Cone> cones;

    void add(const Direction& w, double theta);
    bool contains(const std::vector<double>& z) const;
    bool empty() const { return cones.empty(); }
};

enum class DecayClass { RAPID, SLOW, INDETERMINATE };
const char* to_string(DecayClass c);
DecayClass decay_class_from_string(const std::string& s);

struct FitParams {
    double N_thr = 5.0;
    double q_min = 0.9;
    double tau = 1.0;
    int tail = 6;
    int min_points = 4;
    bool envelope = true;
};

struct DecayFit {
    std::vector<double> abscissae;
    std::vector<double> sup_values;
    double floor = 0.0;
    double fitted_order = std::numeric_limits<double>::quiet_NaN();
    double r_squared = 0.0;
    DecayClass classification = DecayClass::INDETERMINATE;
};

// Log-log fit of -log(sup) against log(abscissa). NaN sups mark skipped samples.
DecayFit fit_decay(const std::vector<double>& abscissae, const std::vector<double>& sups,
                   double floor, const FitParams& p = {});

double l2_norm(const SampledSignal& u);
cplx inner(const SampledSignal& u, const SampledSignal& v);

struct SeminormResult {
    double value = 0.0;
    bool alias_warning = false;
};

SeminormResult schwartz_seminorm(const SampledSignal& u, int m, int k);

// Geometric shells: r_min * rho^i while the shell's outer edge stays <= r_max.
std::vector<double> geometric_radii(double r_min, double rho, double r_max);
double shell_outer(const std::vector<double>& radii, std::size_t i);

}  // namespace wfg
