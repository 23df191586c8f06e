#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wfg/symbols.hpp"

namespace wfg {

using DenseMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// apply(u)_i = sum_j K(i, j) u_j dx.
struct OperatorKernel {
    AxisSpec axis;
    double t = 0.5;
    DenseMatrix K;
    std::string symbol_id;

    SampledSignal apply(const SampledSignal& u) const;
    SampledSignal apply_serial(const SampledSignal& u) const;
};

// Quadrature part of a t-quantized symbol stored as rows of the
// (sample point, offset) table; rows exist only where the symbol lives.
struct MidpointTable {
    AxisSpec axis;
    int P = 1, Q = 2;                // t = P / Q
    std::vector<int> qs;             // sample-point indices present
    std::vector<CVec> rows;          // rows[r][l mod 2n], phase (-1)^l folded in

    std::vector<SampledSignal> apply(const std::vector<SampledSignal>& us) const;
    std::vector<SampledSignal> apply_serial(const std::vector<SampledSignal>& us) const;
};

// t must be 0, 1 or P/Q with Q <= 4 whenever the symbol needs xi-quadrature.
OperatorKernel build_kernel(const SymbolExpr& a, double t, const AxisSpec& axis);
OperatorKernel build_kernel(const DilatedSymbol& a, double t, const AxisSpec& axis);

// Matrix-free application: spectral differential part plus the midpoint table.
std::vector<SampledSignal> apply_quantized(const SymbolExpr& a, double t, const std::vector<SampledSignal>& us);
SampledSignal apply_quantized(const SymbolExpr& a, double t, const SampledSignal& u);
MidpointTable build_midpoint_table(const SymbolExpr& a, double t, const AxisSpec& axis);

// Weyl (t = 1/2) application through the kernel cache.
SampledSignal apply_weyl(const DilatedSymbol& a, const SampledSignal& u);
SampledSignal apply_weyl(const SymbolExpr& a, const SampledSignal& u);

class KernelCache {
public:
    std::shared_ptr<const OperatorKernel> get(const SymbolExpr& a, double h, double t, const AxisSpec& axis);
    std::size_t size() const;
    void clear();
    // Entries beyond this count evict the oldest insertion.
    void set_capacity(std::size_t c);

private:
    mutable std::shared_mutex mu_;
    std::map<std::string, std::shared_ptr<const OperatorKernel>> map_;
    std::vector<std::string> order_;
    std::size_t capacity_ = 8;
};

KernelCache& kernel_cache();

// sum_{j < N} h^{2j} (i sigma(D) / 2)^j / j! (a (x) b) on the diagonal, at h z.
SymbolExpr weyl_product_expand(const SymbolExpr& a, const SymbolExpr& b, int N, double h = 1.0);
// Weyl symbol of the Kohn-Nirenberg operator a(x, D): sum_{j < N} h^{2j} ((i/2) d_x . d_xi)^j / j! a, at h z.
SymbolExpr kn_to_weyl(const SymbolExpr& a, int N, double h = 1.0);

// Spectral D^m as a dense circulant (entries already divided by dx).
DenseMatrix spectral_D_matrix(const AxisSpec& axis, int m);

}  // namespace wfg
