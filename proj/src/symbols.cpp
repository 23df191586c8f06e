#include "wfg/symbols.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace wfg {

namespace {

int nvars(const SymbolExpr& a) { return 2 * a.d; }

void check_point(const SymbolExpr& a, const std::vector<double>& z) {
    if (static_cast<int>(z.size()) != nvars(a)) throw ConfigError("symbol: point has wrong dimension");
}

cplx eval_term(const SymbolTerm& t, const std::vector<double>& z) {
    double v = 1.0;
    for (const auto& b : t.bumps) {
        double q = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) q += (z[i] - b.center[i]) * (z[i] - b.center[i]);
        q /= b.R * b.R;
        if (q >= 1.0) return 0.0;
        v *= std::pow(1.0 - q, b.e);
    }
    for (std::size_t i = 0; i < z.size(); ++i)
        if (t.powers[i]) v *= std::pow(z[i], t.powers[i]);
    if (t.gauss) {
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) s += t.gauss->A[i] * (z[i] - t.gauss->center[i]) * (z[i] - t.gauss->center[i]);
        v *= std::exp(-s);
    }
    return t.coeff * v;
}

std::string term_key(const SymbolTerm& t) {
    std::ostringstream os;
    os.precision(17);
    for (int p : t.powers) os << p << ',';
    os << '|';
    if (t.gauss) {
        for (double c : t.gauss->center) os << c << ',';
        for (double a : t.gauss->A) os << a << ',';
    }
    os << '|';
    for (const auto& b : t.bumps) {
        for (double c : b.center) os << c << ',';
        os << b.R << ',' << b.e << ',' << b.p << ';';
    }
    return os.str();
}

// d/dz_var of one term; appends results to out.
void diff_term(const SymbolTerm& t, int var, std::vector<SymbolTerm>& out, bool& exact) {
    // Monomial factor.
    if (t.powers[var] > 0) {
        SymbolTerm s = t;
        s.coeff *= double(t.powers[var]);
        s.powers[var] -= 1;
        out.push_back(s);
    }
    // Gaussian factor: -2 A (z - c) times itself.
    if (t.gauss && t.gauss->A[var] != 0.0) {
        const double A = t.gauss->A[var], c = t.gauss->center[var];
        SymbolTerm s = t;
        s.coeff *= -2.0 * A;
        s.powers[var] += 1;
        out.push_back(s);
        if (c != 0.0) {
            SymbolTerm s2 = t;
            s2.coeff *= 2.0 * A * c;
            out.push_back(s2);
        }
    }
    // Bump factors: e (1 - q)^{e - 1} (-2 (z - c) / R^2).
    for (std::size_t b = 0; b < t.bumps.size(); ++b) {
        const auto& bf = t.bumps[b];
        if (bf.e - 1 < 2) exact = false;
        const double k = -2.0 * bf.e / (bf.R * bf.R);
        SymbolTerm s = t;
        s.bumps[b].e -= 1;
        s.coeff *= k;
        s.powers[var] += 1;
        out.push_back(s);
        if (bf.center[var] != 0.0) {
            SymbolTerm s2 = t;
            s2.bumps[b].e -= 1;
            s2.coeff *= -k * bf.center[var];
            out.push_back(s2);
        }
    }
}

SymbolExpr diff_once(const SymbolExpr& a, int var, bool& exact) {
    SymbolExpr r;
    r.d = a.d;
    r.declared_order = a.declared_order - 1;
    for (const auto& t : a.terms) diff_term(t, var, r.terms, exact);
    return r.simplified();
}

double bracket(const std::vector<double>& z) {
    double s = 1.0;
    for (double v : z) s += v * v;
    return std::sqrt(s);
}

}  // namespace

cplx SymbolExpr::eval(const std::vector<double>& z) const {
    check_point(*this, z);
    cplx s = 0.0;
    for (const auto& t : terms) s += eval_term(t, z);
    return s;
}

SymbolExpr SymbolExpr::simplified() const {
    std::map<std::string, std::size_t> idx;
    SymbolExpr r;
    r.d = d;
    r.declared_order = declared_order;
    for (const auto& t : terms) {
        if (t.coeff == cplx(0.0)) continue;
        auto key = term_key(t);
        auto it = idx.find(key);
        if (it == idx.end()) {
            idx[key] = r.terms.size();
            r.terms.push_back(t);
        } else {
            r.terms[it->second].coeff += t.coeff;
        }
    }
    std::vector<SymbolTerm> kept;
    for (auto& t : r.terms)
        if (std::abs(t.coeff) > 0.0) kept.push_back(t);
    r.terms = std::move(kept);
    return r;
}

bool SymbolExpr::depends_on(int var) const {
    for (const auto& t : terms) {
        if (t.powers[var] || !t.bumps.empty()) return true;
        if (t.gauss && t.gauss->A[var] != 0.0) return true;
    }
    return false;
}

std::string SymbolExpr::id() const { return symbol_to_json(*this).dump(); }

SymbolExpr SymbolExpr::constant(cplx c, int d) {
    SymbolExpr a;
    a.d = d;
    SymbolTerm t;
    t.coeff = c;
    t.powers.assign(2 * d, 0);
    a.terms.push_back(t);
    return a;
}

SymbolExpr SymbolExpr::monomial(const std::vector<int>& powers, cplx c) {
    if (powers.size() % 2) throw ConfigError("monomial: powers must have even length");
    SymbolExpr a;
    a.d = static_cast<int>(powers.size() / 2);
    SymbolTerm t;
    t.coeff = c;
    t.powers = powers;
    a.terms.push_back(t);
    int deg = 0;
    for (int p : powers) deg += p;
    a.declared_order = deg;
    return a;
}

SymbolExpr SymbolExpr::bump(const std::vector<double>& center, double R, int p) {
    if (center.size() % 2) throw ConfigError("bump: center must have even length");
    if (!(R > 0) || p < 1) throw ConfigError("bump: radius must be positive and p >= 1");
    SymbolExpr a;
    a.d = static_cast<int>(center.size() / 2);
    SymbolTerm t;
    t.powers.assign(center.size(), 0);
    t.bumps.push_back({center, R, p, p});
    a.terms.push_back(t);
    a.declared_order = 0;
    return a;
}

SymbolExpr SymbolExpr::gaussian(const std::vector<double>& center, const std::vector<double>& A, cplx c) {
    if (center.size() % 2 || A.size() != center.size()) throw ConfigError("gaussian: bad center/widths");
    SymbolExpr a;
    a.d = static_cast<int>(center.size() / 2);
    SymbolTerm t;
    t.coeff = c;
    t.powers.assign(center.size(), 0);
    t.gauss = GaussFactor{center, A};
    a.terms.push_back(t);
    return a;
}

SymbolExpr operator+(const SymbolExpr& a, const SymbolExpr& b) {
    if (a.d != b.d) throw ConfigError("symbol sum: dimension mismatch");
    SymbolExpr r = a;
    r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
    r.declared_order = std::max(a.declared_order, b.declared_order);
    return r.simplified();
}

SymbolExpr operator*(cplx c, const SymbolExpr& a) {
    SymbolExpr r = a;
    for (auto& t : r.terms) t.coeff *= c;
    return r.simplified();
}

SymbolExpr operator*(const SymbolExpr& a, const SymbolExpr& b) {
    if (a.d != b.d) throw ConfigError("symbol product: dimension mismatch");
    SymbolExpr r;
    r.d = a.d;
    r.declared_order = a.declared_order + b.declared_order;
    const int nv = 2 * a.d;
    for (const auto& s : a.terms)
        for (const auto& t : b.terms) {
            SymbolTerm u;
            u.coeff = s.coeff * t.coeff;
            u.powers.resize(nv);
            for (int i = 0; i < nv; ++i) u.powers[i] = s.powers[i] + t.powers[i];
            if (s.gauss && t.gauss) {
                GaussFactor g{std::vector<double>(nv), std::vector<double>(nv)};
                double k = 0.0;
                for (int i = 0; i < nv; ++i) {
                    const double A1 = s.gauss->A[i], A2 = t.gauss->A[i], c1 = s.gauss->center[i], c2 = t.gauss->center[i];
                    g.A[i] = A1 + A2;
                    g.center[i] = g.A[i] > 0 ? (A1 * c1 + A2 * c2) / g.A[i] : 0.0;
                    if (g.A[i] > 0) k += A1 * A2 / g.A[i] * (c1 - c2) * (c1 - c2);
                }
                u.coeff *= std::exp(-k);
                u.gauss = g;
            } else if (s.gauss) {
                u.gauss = s.gauss;
            } else if (t.gauss) {
                u.gauss = t.gauss;
            }
            u.bumps = s.bumps;
            u.bumps.insert(u.bumps.end(), t.bumps.begin(), t.bumps.end());
            r.terms.push_back(u);
        }
    return r.simplified();
}

cplx DilatedSymbol::eval(const std::vector<double>& z) const {
    std::vector<double> hz(z);
    for (auto& v : hz) v *= h;
    return base.eval(hz);
}

SymbolExpr DilatedSymbol::materialize() const { return dilate(base, h); }

SymbolExpr dilate(const SymbolExpr& a, double h) {
    if (!(h > 0)) throw ConfigError("dilate: h must be positive");
    SymbolExpr r = a;
    for (auto& t : r.terms) {
        int deg = 0;
        for (int p : t.powers) deg += p;
        t.coeff *= std::pow(h, deg);
        if (t.gauss) {
            for (auto& A : t.gauss->A) A *= h * h;
            for (auto& c : t.gauss->center) c /= h;
        }
        for (auto& b : t.bumps) {
            for (auto& c : b.center) c /= h;
            b.R /= h;
        }
    }
    return r;
}

SymbolExpr differentiate_exact(const SymbolExpr& a, const std::vector<int>& alpha) {
    if (static_cast<int>(alpha.size()) != nvars(a)) throw ConfigError("differentiate: multi-index has wrong length");
    SymbolExpr r = a;
    bool exact = true;
    for (int v = 0; v < nvars(a); ++v)
        for (int k = 0; k < alpha[v]; ++k) {
            r = diff_once(r, v, exact);
            if (!exact) throw OrderTooHigh("derivative order exceeds taper smoothness (p - 2)");
        }
    return r;
}

Derivative differentiate_symbol(const SymbolExpr& a, const std::vector<int>& alpha) {
    Derivative d{a, alpha, std::nullopt};
    try {
        d.exact_expr = differentiate_exact(a, alpha);
    } catch (const OrderTooHigh&) {
    }
    return d;
}

namespace {

// Central differences, applied one order at a time along each variable.
cplx numeric_deriv(const SymbolExpr& a, std::vector<int> alpha, std::vector<double> z, double step) {
    int var = -1;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (alpha[i] > 0) {
            var = static_cast<int>(i);
            break;
        }
    if (var < 0) return a.eval(z);
    alpha[var] -= 1;
    auto zp = z, zm = z;
    zp[var] += step;
    zm[var] -= step;
    return (numeric_deriv(a, alpha, zp, step) - numeric_deriv(a, alpha, zm, step)) / (2.0 * step);
}

}  // namespace

cplx Derivative::eval(const std::vector<double>& z) const {
    if (exact_expr) return exact_expr->eval(z);
    double nz = 0;
    for (double v : z) nz += v * v;
    const double s = 1e-4 * (1.0 + std::sqrt(nz));
    // Richardson: error is O(s^2), so (4 D(s/2) - D(s)) / 3.
    const cplx d1 = numeric_deriv(base, alpha, z, s);
    const cplx d2 = numeric_deriv(base, alpha, z, s / 2);
    return (4.0 * d2 - d1) / 3.0;
}

double shubin_seminorm_probe(const SymbolExpr& a, double m, const std::vector<int>& alpha,
                             const std::vector<std::vector<double>>& pts) {
    const Derivative d = differentiate_symbol(a, alpha);
    int ord = 0;
    for (int k : alpha) ord += k;
    double sup = 0.0;
    for (const auto& z : pts) sup = std::max(sup, std::abs(d.eval(z)) * std::pow(bracket(z), ord - m));
    return sup;
}

std::vector<std::vector<double>> box_grid(int d, double R, int count) {
    const int nv = 2 * d, side = 2 * count + 1;
    std::size_t total = 1;
    for (int i = 0; i < nv; ++i) total *= side;
    std::vector<std::vector<double>> pts;
    pts.reserve(total);
    for (std::size_t q = 0; q < total; ++q) {
        std::vector<double> z(nv);
        std::size_t r = q;
        for (int i = 0; i < nv; ++i) {
            z[i] = R * (static_cast<int>(r % side) - count) / std::max(count, 1);
            r /= side;
        }
        pts.push_back(z);
    }
    return pts;
}

namespace {

std::vector<double> vec_field(const nlohmann::json& j, const char* key, std::size_t len, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
    auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != len) throw ConfigError(where + ": '" + key + "' must have length " + std::to_string(len));
    return v;
}

}  // namespace

SymbolExpr symbol_from_json(const nlohmann::json& j) {
    try {
        SymbolExpr a;
        a.d = j.value("d", 1);
        if (a.d < 1 || a.d > 2) throw ConfigError("symbol: d must be 1 or 2");
        a.declared_order = j.value("order", 0.0);
        const std::size_t nv = 2 * a.d;
        if (!j.contains("terms") || !j["terms"].is_array()) throw ConfigError("symbol: 'terms' must be an array");
        int idx = 0;
        for (const auto& tj : j["terms"]) {
            const std::string where = "symbol.terms[" + std::to_string(idx++) + "]";
            SymbolTerm t;
            t.coeff = cplx(tj.value("coeff_re", 1.0), tj.value("coeff_im", 0.0));
            t.powers = tj.value("powers", std::vector<int>(nv, 0));
            if (t.powers.size() != nv) throw ConfigError(where + ": 'powers' must have length " + std::to_string(nv));
            for (int p : t.powers)
                if (p < 0) throw ConfigError(where + ": powers must be >= 0");
            if (tj.contains("gauss")) {
                const auto& g = tj["gauss"];
                GaussFactor gf{vec_field(g, "center", nv, where + ".gauss"), vec_field(g, "widths", nv, where + ".gauss")};
                for (double A : gf.A)
                    if (A < 0) throw ConfigError(where + ".gauss: widths must be >= 0");
                t.gauss = gf;
            }
            if (tj.contains("bump")) {
                auto bl = tj["bump"].is_array() ? tj["bump"] : nlohmann::json::array({tj["bump"]});
                for (const auto& bj : bl) {
                    BumpFactor b;
                    b.center = vec_field(bj, "center", nv, where + ".bump");
                    b.R = bj.value("radius", 1.0);
                    b.p = bj.value("p", 8);
                    b.e = bj.value("e", b.p);
                    if (!(b.R > 0) || b.p < 1) throw ConfigError(where + ".bump: radius > 0 and p >= 1 required");
                    t.bumps.push_back(b);
                }
            }
            a.terms.push_back(t);
        }
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("symbol: ") + e.what());
    }
}

nlohmann::json symbol_to_json(const SymbolExpr& a) {
    nlohmann::json j;
    j["d"] = a.d;
    j["order"] = a.declared_order;
    j["terms"] = nlohmann::json::array();
    for (const auto& t : a.terms) {
        nlohmann::json tj;
        tj["coeff_re"] = t.coeff.real();
        tj["coeff_im"] = t.coeff.imag();
        tj["powers"] = t.powers;
        if (t.gauss) tj["gauss"] = {{"center", t.gauss->center}, {"widths", t.gauss->A}};
        if (!t.bumps.empty()) {
            nlohmann::json bl = nlohmann::json::array();
            for (const auto& b : t.bumps) {
                nlohmann::json bj{{"center", b.center}, {"radius", b.R}, {"p", b.p}};
                if (b.e != b.p) bj["e"] = b.e;
                bl.push_back(bj);
            }
            tj["bump"] = bl.size() == 1 ? bl[0] : bl;
        }
        j["terms"].push_back(tj);
    }
    return j;
}

}  // namespace wfg
