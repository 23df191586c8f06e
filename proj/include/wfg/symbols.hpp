#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wfg/grid.hpp"

namespace wfg {

// exp(-sum_i A_i (z_i - c_i)^2), diagonal A >= 0.
struct GaussFactor {
    std::vector<double> center;
    std::vector<double> A;
};

// (1 - |z - c|^2 / R^2)^e inside the closed ball, 0 outside; p is the taper
// degree it started from (e drops by one per derivative).
struct BumpFactor {
    std::vector<double> center;
    double R = 1.0;
    int e = 8;
    int p = 8;
};

struct SymbolTerm {
    cplx coeff = 1.0;
    std::vector<int> powers;  // size 2d, over (x, xi)
    std::optional<GaussFactor> gauss;
    std::vector<BumpFactor> bumps;
};

// Sum of terms on R^{2d}.
struct SymbolExpr {
    int d = 1;
    std::vector<SymbolTerm> terms;
    double declared_order = 0.0;

    cplx eval(const std::vector<double>& z) const;
    // Merge terms sharing all factors; drop zero coefficients.
    SymbolExpr simplified() const;
    bool depends_on(int var) const;
    std::string id() const;

    static SymbolExpr constant(cplx c, int d = 1);
    static SymbolExpr monomial(const std::vector<int>& powers, cplx c = 1.0);
    static SymbolExpr bump(const std::vector<double>& center, double R, int p = 8);
    static SymbolExpr gaussian(const std::vector<double>& center, const std::vector<double>& A, cplx c = 1.0);
};

SymbolExpr operator+(const SymbolExpr& a, const SymbolExpr& b);
SymbolExpr operator*(const SymbolExpr& a, const SymbolExpr& b);
SymbolExpr operator*(cplx c, const SymbolExpr& a);

// eval(z) == base.eval(h z).
struct DilatedSymbol {
    SymbolExpr base;
    double h = 1.0;

    cplx eval(const std::vector<double>& z) const;
    // Closed-form a(h z) as a SymbolExpr.
    SymbolExpr materialize() const;
};

SymbolExpr dilate(const SymbolExpr& a, double h);

// Exact derivative when every bump keeps exponent >= 2 (order <= p - 2);
// otherwise a numeric central difference with one Richardson step.
struct Derivative {
    SymbolExpr base;
    std::vector<int> alpha;
    std::optional<SymbolExpr> exact_expr;

    bool exact() const { return exact_expr.has_value(); }
    cplx eval(const std::vector<double>& z) const;
};

Derivative differentiate_symbol(const SymbolExpr& a, const std::vector<int>& alpha);
// Exact derivative or OrderTooHigh.
SymbolExpr differentiate_exact(const SymbolExpr& a, const std::vector<int>& alpha);

// sup over pts of |d^alpha a(z)| <z>^{|alpha| - m}.
double shubin_seminorm_probe(const SymbolExpr& a, double m, const std::vector<int>& alpha,
                             const std::vector<std::vector<double>>& pts);
// Uniform (2 count + 1)^{2d} grid on [-R, R]^{2d}.
std::vector<std::vector<double>> box_grid(int d, double R, int count);

// JSON literal: {"d":1, "order":m, "terms":[{coeff_re, coeff_im, powers, gauss:{center, widths},
// bump:{center, radius, p}}]}. "bump" may also be a list.
SymbolExpr symbol_from_json(const nlohmann::json& j);
nlohmann::json symbol_to_json(const SymbolExpr& a);

}  // namespace wfg
