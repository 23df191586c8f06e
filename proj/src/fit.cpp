#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "wfg/grid.hpp"

namespace wfg {

namespace {

Eigen::VectorXd polyfit(const std::vector<double>& X, const std::vector<double>& Y, int degree) {
    const int n = static_cast<int>(X.size());
    Eigen::MatrixXd A(n, degree + 1);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        double p = 1.0;
        for (int j = 0; j <= degree; ++j) {
            A(i, j) = p;
            p *= X[i];
        }
        b(i) = Y[i];
    }
    return A.colPivHouseholderQr().solve(b);
}

double polyval(const Eigen::VectorXd& c, double x) {
    double s = 0.0;
    for (int j = static_cast<int>(c.size()) - 1; j >= 0; --j) s = s * x + c(j);
    return s;
}

DecayClass by_order(double order, const FitParams& p) {
    return order >= p.N_thr ? DecayClass::RAPID : DecayClass::SLOW;
}

}  // namespace

DecayFit fit_decay(const std::vector<double>& abscissae, const std::vector<double>& sups,
                   double floor, const FitParams& p) {
    if (abscissae.size() != sups.size()) throw EstimatorError("fit: abscissae and sups differ in length");
    for (std::size_t i = 1; i < abscissae.size(); ++i)
        if (!(abscissae[i] > abscissae[i - 1])) throw EstimatorError("fit: abscissae must increase strictly");

    DecayFit fit;
    fit.abscissae = abscissae;
    fit.sup_values = sups;
    fit.floor = floor;

    std::vector<double> a, s;
    for (std::size_t i = 0; i < sups.size(); ++i) {
        if (std::isnan(sups[i])) continue;
        if (!(abscissae[i] > 0.0)) throw EstimatorError("fit: abscissae must be positive");
        a.push_back(abscissae[i]);
        s.push_back(sups[i]);
    }
    if (s.empty()) return fit;

    if (p.envelope)
        for (int i = static_cast<int>(s.size()) - 2; i >= 0; --i) s[i] = std::max(s[i], s[i + 1]);

    if (std::all_of(s.begin(), s.end(), [&](double v) { return v <= floor; })) {
        fit.fitted_order = std::numeric_limits<double>::infinity();
        fit.r_squared = 1.0;
        fit.classification = DecayClass::RAPID;
        return fit;
    }

    bool hit = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] <= floor) {
            a.resize(i + 1);
            s.resize(i + 1);
            s[i] = floor;
            hit = true;
            break;
        }
    }

    std::vector<double> X(a.size()), Y(s.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        X[i] = std::log(a[i]);
        Y[i] = -std::log(s[i]);
    }

    if (static_cast<int>(X.size()) < p.min_points) {
        if (hit && X.size() >= 2) {
            fit.fitted_order = polyfit(X, Y, 1)(1);
            fit.r_squared = 1.0;
            fit.classification = by_order(fit.fitted_order, p);
        }
        return fit;
    }

    if (p.tail > 0 && static_cast<int>(X.size()) > p.tail) {
        X.erase(X.begin(), X.end() - p.tail);
        Y.erase(Y.begin(), Y.end() - p.tail);
    }
    const double slope = polyfit(X, Y, 1)(1);
    const Eigen::VectorXd quad = polyfit(X, Y, 2);
    double mean = 0.0;
    for (double y : Y) mean += y;
    mean /= Y.size();
    double sst = 0.0, ssr = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        sst += (Y[i] - mean) * (Y[i] - mean);
        const double r = Y[i] - polyval(quad, X[i]);
        ssr += r * r;
    }
    const double q = 1.0 - ssr / (sst + X.size() * p.tau * p.tau);
    fit.fitted_order = slope;
    fit.r_squared = std::clamp(q, 0.0, 1.0);
    fit.classification = fit.r_squared < p.q_min ? DecayClass::INDETERMINATE : by_order(slope, p);
    return fit;
}

}  // namespace wfg
