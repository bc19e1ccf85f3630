#pragma once

// The quasi-modular form families: E_{j,1} by the forward recursion, the
// integral avatars F_m = E_{-m,1}^(q^m), the determinant family E_{j,k} (and
// its two-variable audit path through H_k(E_bold)), decomposition of a
// series into an isobaric polynomial in E, g, h, and brute-force extremal
// search by row reduction of coefficient matrices.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hankel.hpp"
#include "polymatrix.hpp"

namespace hankel {

struct NoSolution : std::runtime_error {
    explicit NoSolution(const std::string& msg) : std::runtime_error(msg) {}
};

struct InsufficientPrecision : std::runtime_error {
    explicit InsufficientPrecision(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- closed-form bookkeeping -------------------------------------------

inline int64_t expected_ord(uint32_t q, uint32_t j, uint32_t k) {
    return ipow(q, j) * ((ipow(q, 2 * k) - 1) / (static_cast<int64_t>(q) * q - 1));
}

inline int64_t weight_of(uint32_t q, uint32_t j, uint32_t k) {
    return (ipow(q, k) - 1) * (ipow(q, j) + 1) / (q - 1);
}

inline uint32_t type_of(uint32_t q, uint32_t k) { return q == 2 ? 0 : k % (q - 1); }

inline int64_t depth_cap(uint32_t q, uint32_t k) { return (ipow(q, k) - 1) / (q - 1); }

struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    Rational() = default;
    Rational(int64_t n, int64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("zero denominator");
        if (den < 0) { num = -num; den = -den; }
        int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
};

inline Rational depth_lower_bound(uint32_t q, uint32_t k) {
    return Rational(1 + ipow(q, k), 32 * (1 + static_cast<int64_t>(q)) * (3 + 2 * q) * (3 + 2 * q));
}

inline int64_t ord_bound(uint32_t q, int64_t l, int64_t w) {
    return 16 * ipow(q, 3) * (3 + 2 * static_cast<int64_t>(q)) * (3 + 2 * q) * l * w;
}

// w >= 4l (2q(q+2)(3+2q) l + 3(q^2+1))^(3/2), compared exactly by squaring.
inline bool weight_satisfies_four(uint32_t q, int64_t l, int64_t w) {
    if (w < 0 || l <= 0) return false;
    __int128 x = static_cast<__int128>(2) * q * (q + 2) * (3 + 2 * q) * l +
                 static_cast<__int128>(3) * (static_cast<int64_t>(q) * q + 1);
    return static_cast<__int128>(w) * w >= static_cast<__int128>(16) * l * l * x * x * x;
}

struct FormMeta {
    int64_t weight = 0;
    uint32_t type = 0;    // residue mod q-1
    int64_t depth = 0;    // depth bound
};

inline FormMeta meta_of(uint32_t q, uint32_t j, uint32_t k) {
    return FormMeta{weight_of(q, j, k), type_of(q, k), depth_cap(q, k)};
}

// ---- the families -------------------------------------------------------

namespace detail {

inline USeries ensure_prec(USeries s, int64_t prec, const char* what) {
    if (s.precision() < prec)
        throw InsufficientPrecision(std::string(what) + ": computed precision " +
                                    std::to_string(s.precision()) + " < required " +
                                    std::to_string(prec));
    return s.truncated(prec);
}

}  // namespace detail

// E_{0,1} = E, E_{1,1} = -(Eg+h)/[1],
// E_{j+2,1} = -(Delta^(q^j) E_{j,1} + g^(q^(j+1)) E_{j+1,1})/[j+2].
// The bracket divisions are coefficient-exact; a failure there signals a
// broken computation, not bad input.
inline std::vector<USeries> E_j1_family(const GeneratorSet& gens, uint32_t jmax, int64_t prec) {
    if (prec > gens.prec) throw InsufficientPrecision("E_j1_family: generators too short");
    const Field& f = gens.field;
    std::vector<USeries> v;
    v.reserve(jmax + 1);
    v.push_back(gens.E.truncated(prec));
    if (jmax >= 1)
        v.push_back(exact_div_scalar((-(gens.E * gens.g + gens.h)).truncated(prec), bracket(f, 1)));
    for (uint32_t j = 0; j + 2 <= jmax; ++j) {
        USeries num = frob_pow(gens.delta, j) * v[j] + frob_pow(gens.g, j + 1) * v[j + 1];
        v.push_back(exact_div_scalar((-num).truncated(prec), bracket(f, j + 2)));
    }
    return v;
}

inline USeries E_j1(const GeneratorSet& gens, uint32_t j, int64_t prec) {
    return E_j1_family(gens, j, prec).back();
}

// F_0 = E, F_1 = -h,
// F_m = -((theta^(q^2) - theta^(q^m)) F_{m-2}^(q^2) + g^q F_{m-1}^q) / Delta.
// The Laurent division by Delta must land back in power series.
inline std::vector<USeries> F_family(const GeneratorSet& gens, uint32_t mmax, int64_t prec) {
    const Field& f = gens.field;
    std::vector<USeries> v;
    v.reserve(mmax + 1);
    v.push_back(detail::ensure_prec(gens.E, prec, "F_0"));
    if (mmax >= 1) v.push_back(detail::ensure_prec(-gens.h, prec, "F_1"));
    if (mmax >= 2) {
        USeries dinv = inverse(gens.delta);
        USeries gq = frob_pow(gens.g, 1);
        for (uint32_t m = 2; m <= mmax; ++m) {
            BiPoly scale = BiPoly::theta(f, ipow(f->q, 2)) - BiPoly::theta(f, ipow(f->q, m));
            USeries num = frob_pow(v[m - 2], 2).scalar_mul(scale) + gq * frob_pow(v[m - 1], 1);
            USeries fm = -(num * dinv);
            if (!fm.is_zero_to_prec() && fm.valuation() < 1)
                throw std::logic_error("F_m recursion: Delta division did not cancel");
            v.push_back(detail::ensure_prec(fm, prec, "F_m"));
        }
    }
    return v;
}

inline USeries F_m(const GeneratorSet& gens, uint32_t m, int64_t prec) {
    return F_family(gens, m, prec).back();
}

// E_{j,k} = det(entries) / B_k(theta), entry at row r, column c being
// E_{j+c-r,1}^(q^r); a negative first index -m is realized integrally as
// F_m^(q^(r-m)).
inline USeries E_jk(const GeneratorSet& gens, uint32_t j, uint32_t k, int64_t prec) {
    if (k == 0 || k > kMaxHankelOrder) throw std::invalid_argument("E_jk supports 1 <= k <= 5");
    std::vector<USeries> e1 = E_j1_family(gens, j + k - 1, prec);
    std::vector<USeries> fm =
        static_cast<int64_t>(k) - 1 - static_cast<int64_t>(j) >= 1
            ? F_family(gens, k - 1 - j, prec)
            : F_family(gens, 0, prec);
    std::function<USeries(size_t, size_t)> entry = [&](size_t r, size_t c) {
        int64_t idx = static_cast<int64_t>(j) + static_cast<int64_t>(c) - static_cast<int64_t>(r);
        if (idx >= 0) return frob_pow(e1[static_cast<size_t>(idx)], static_cast<uint32_t>(r));
        uint32_t m = static_cast<uint32_t>(-idx);
        return frob_pow(fm[m], static_cast<uint32_t>(r) - m);
    };
    USeries det = subset_determinant<USeries>(k, entry);
    USeries out = exact_div_scalar(det, bk_poly(gens.field, k, Var::theta));
    return detail::ensure_prec(out, prec, "E_jk");
}

// Audit path: E_{j,k} = (tau^j H_k(E_bold) / B_k(t)) |_{t=theta}.
inline USeries E_jk_via_t(const GeneratorSet& gens, const Deformation& def, uint32_t j,
                          uint32_t k, int64_t prec) {
    USeries h = tau(hankel_det(def.Ebold, k), j);
    USeries quotient = exact_div_scalar(h.precision() > prec ? h.truncated(prec) : h,
                                        bk_poly(gens.field, k, Var::t));
    return detail::ensure_prec(specialize_t(quotient), prec, "E_jk_via_t");
}

// ---- isobaric polynomials in E, g, h ------------------------------------

struct Monomial {
    int64_t a = 0, b = 0, c = 0;  // degrees in E, g, h

    friend bool operator==(const Monomial& x, const Monomial& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c;
    }
    // canonical listing order: deeper in E first, then by h-degree
    friend bool operator<(const Monomial& x, const Monomial& y) {
        if (x.a != y.a) return x.a > y.a;
        if (x.c != y.c) return x.c < y.c;
        return x.b < y.b;
    }
};

// All E^a g^b h^c with a <= l, 2a + (q-1)b + (q+1)c = w and
// a + c = m mod (q-1), ordered by (a, c).
inline std::vector<Monomial> monomial_basis(uint32_t q, int64_t w, int64_t m, int64_t l) {
    std::vector<Monomial> out;
    if (w < 0) return out;
    for (int64_t a = 0; a <= l; ++a) {
        if (2 * a > w) break;
        for (int64_t c = 0; 2 * a + (q + 1) * c <= w; ++c) {
            int64_t rest = w - 2 * a - (q + 1) * c;
            if (rest % (q - 1) != 0 && q > 2) continue;
            int64_t b = q > 2 ? rest / (q - 1) : rest;
            int64_t type_diff = a + c - m;
            if (q > 2 && ((type_diff % (q - 1)) + (q - 1)) % (q - 1) != 0) continue;
            out.push_back({a, b, c});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct IsobaricPoly {
    Field field;
    std::vector<std::pair<Monomial, FracPoly>> terms;  // sorted by monomial

    int64_t deg_E() const {
        int64_t d = 0;
        for (const auto& [m, c] : terms)
            if (!c.is_zero()) d = std::max(d, m.a);
        return d;
    }

    const FracPoly* coeff(const Monomial& m) const {
        for (const auto& [mm, c] : terms)
            if (mm == m) return &c;
        return nullptr;
    }

    friend bool operator==(const IsobaricPoly& x, const IsobaricPoly& y) {
        if (x.terms.size() != y.terms.size()) return false;
        for (size_t i = 0; i < x.terms.size(); ++i) {
            if (!(x.terms[i].first == y.terms[i].first)) return false;
            if (x.terms[i].second != y.terms[i].second) return false;
        }
        return true;
    }
};

namespace detail {

inline std::vector<USeries> power_table(const USeries& base, int64_t maxexp, int64_t prec) {
    std::vector<USeries> v;
    v.reserve(static_cast<size_t>(maxexp) + 1);
    v.push_back(USeries::one(base.field(), prec));
    for (int64_t i = 1; i <= maxexp; ++i) v.push_back((v.back() * base).truncated(prec));
    return v;
}

struct MonomialSeries {
    std::vector<Monomial> basis;
    std::vector<USeries> series;
};

inline MonomialSeries monomial_series(const GeneratorSet& gens, const std::vector<Monomial>& basis,
                                      int64_t prec) {
    int64_t ma = 0, mb = 0, mc = 0;
    for (const auto& m : basis) {
        ma = std::max(ma, m.a);
        mb = std::max(mb, m.b);
        mc = std::max(mc, m.c);
    }
    auto ep = power_table(gens.E.truncated(prec), ma, prec);
    auto gp = power_table(gens.g.truncated(prec), mb, prec);
    auto hp = power_table(gens.h.truncated(prec), mc, prec);
    MonomialSeries ms{basis, {}};
    ms.series.reserve(basis.size());
    for (const auto& m : basis)
        ms.series.push_back((ep[static_cast<size_t>(m.a)] * gp[static_cast<size_t>(m.b)] *
                             hp[static_cast<size_t>(m.c)])
                                .truncated(prec));
    return ms;
}

}  // namespace detail

// Evaluates D * poly where D is the least common denominator, so everything
// stays in A[[u]]. Returns the series and D.
inline std::pair<USeries, BiPoly> eval_times_denominator(const IsobaricPoly& poly,
                                                         const GeneratorSet& gens, int64_t prec) {
    const Field& f = poly.field;
    BiPoly den = BiPoly::one(f);
    for (const auto& [m, c] : poly.terms) {
        BiPoly g = gcd_theta(den, c.den);
        den = exact_div(den * c.den, g);
    }
    std::vector<Monomial> basis;
    for (const auto& [m, c] : poly.terms) basis.push_back(m);
    auto ms = detail::monomial_series(gens, basis, prec);
    USeries acc = USeries::zero_to(f, prec);
    for (size_t i = 0; i < poly.terms.size(); ++i) {
        BiPoly scale = poly.terms[i].second.num * exact_div(den, poly.terms[i].second.den);
        acc = acc + ms.series[i].scalar_mul(scale);
    }
    return {acc, den};
}

// Solves f = sum x_{a,b,c} E^a g^b h^c by matching u-coefficients, then
// re-verifies the solution against every available coefficient of f.
inline IsobaricPoly decompose_Egh(const GeneratorSet& gens, const USeries& f, int64_t w,
                                  int64_t m, int64_t l, int64_t margin = 20) {
    const Field& fd = gens.field;
    std::vector<Monomial> basis = monomial_basis(fd->q, w, m, l);
    if (basis.empty()) throw NoSolution("empty monomial basis: w != 2m mod (q-1)");
    int64_t prec = std::min(f.precision(), gens.prec);
    if (prec < static_cast<int64_t>(basis.size()) + margin)
        throw InsufficientPrecision("decompose_Egh: need precision >= basis size + margin");
    auto ms = detail::monomial_series(gens, basis, prec);

    size_t rows = static_cast<size_t>(prec), cols = basis.size();
    PolyMatrix M(fd, rows, cols);
    std::vector<BiPoly> rhs(rows, BiPoly(fd));
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols; ++c) M.at(r, c) = ms.series[c].coeff_at(static_cast<int64_t>(r));
        rhs[r] = f.coeff_at(static_cast<int64_t>(r));
        if (!rhs[r].is_t_free())
            throw std::invalid_argument("decompose_Egh: input series is not over A");
    }
    std::optional<std::vector<FracPoly>> x;
    try {
        x = linear_solve_ff(M, rhs);
    } catch (const std::runtime_error&) {
        throw InsufficientPrecision("decompose_Egh: coefficient matrix is rank deficient");
    }
    if (!x) throw NoSolution("series does not lie in the requested space");

    IsobaricPoly poly{fd, {}};
    for (size_t c = 0; c < cols; ++c) {
        if (!(*x)[c].is_zero()) poly.terms.emplace_back(basis[c], (*x)[c]);
    }
    auto [recon, den] = eval_times_denominator(poly, gens, prec);
    if (!equal_to_min_prec(recon, f.truncated(prec).scalar_mul(den)))
        throw NoSolution("solution fails re-verification against the full coefficient window");
    return poly;
}

// ---- extremal search -----------------------------------------------------

struct ExtremalResult {
    int64_t max_ord = 0;
    USeries primitive;                 // A-integral extremal combination
    BiPoly lead;                       // its leading coefficient
    std::optional<USeries> normalised; // primitive/lead when the division is exact
    IsobaricPoly combo;                // coefficients of the normalised form
    int64_t precision_used = 0;
};

inline int64_t default_extremal_precision(uint32_t q, int64_t w, int64_t l) {
    if (weight_satisfies_four(q, l, w)) return ord_bound(q, l, w) + 20;
    return 2 * w + 2 * l * static_cast<int64_t>(q) + 20;
}

// Builds the coefficient matrix of all basis monomials, row-reduces it
// fraction-free, and reads the extremal order off the last pivot. Retries
// once at doubled precision when the pivot is too close to the window edge
// (or the window cannot yet separate the monomials).
inline ExtremalResult extremal_search(const Field& fd, int64_t w, int64_t m, int64_t l,
                                      int64_t prec = 0, int64_t margin = 20) {
    std::vector<Monomial> basis = monomial_basis(fd->q, w, m, l);
    if (basis.empty()) throw NoSolution("empty monomial basis: w != 2m mod (q-1)");
    if (prec <= 0) prec = default_extremal_precision(fd->q, w, l);

    for (int attempt = 0; attempt < 2; ++attempt) {
        GeneratorSet gens = make_generators(fd, prec);
        auto ms = detail::monomial_series(gens, basis, prec);
        size_t n = basis.size();
        PolyMatrix V(fd, n, static_cast<size_t>(prec));
        for (size_t r = 0; r < n; ++r)
            for (int64_t e = 0; e < prec; ++e)
                V.at(r, static_cast<size_t>(e)) = ms.series[r].coeff_at(e);
        RowReduceResult rr = row_reduce_ff(V);
        if (rr.rank < n || rr.pivot_cols.back() >= static_cast<size_t>(prec - margin)) {
            prec *= 2;
            continue;
        }
        ExtremalResult res;
        res.precision_used = prec;
        res.max_ord = static_cast<int64_t>(rr.pivot_cols.back());
        size_t last = rr.rank - 1;
        std::vector<BiPoly> window;
        window.reserve(static_cast<size_t>(prec) - rr.pivot_cols.back());
        for (size_t e = rr.pivot_cols.back(); e < static_cast<size_t>(prec); ++e)
            window.push_back(rr.echelon.at(last, e));
        res.primitive = USeries::from_window(fd, res.max_ord, std::move(window), prec);
        res.lead = rr.echelon.at(last, rr.pivot_cols.back());
        res.combo.field = fd;
        for (size_t c = 0; c < n; ++c) {
            if (!rr.transform.at(last, c).is_zero())
                res.combo.terms.emplace_back(basis[c], FracPoly(rr.transform.at(last, c), res.lead));
        }
        try {
            res.normalised = exact_div_scalar(res.primitive, res.lead);
        } catch (const NonExactCoefficient&) {
            res.normalised = std::nullopt;
        }
        return res;
    }
    throw InsufficientPrecision("extremal_search: order too close to the precision window");
}

// ---- display -------------------------------------------------------------

// Writes a t-free polynomial as c * [j1]^e1 * [j2]^e2 ... when it is a
// constant multiple of a product of brackets.
inline std::optional<std::string> bracket_product_text(const BiPoly& d) {
    if (d.is_zero() || !d.is_t_free()) return std::nullopt;
    const Field& f = d.field();
    BiPoly rem = d;
    std::string s;
    uint32_t jmax = 0;
    while (ipow(f->q, jmax + 1) <= rem.deg_theta()) ++jmax;
    for (uint32_t j = jmax; j >= 1; --j) {
        int count = 0;
        while (rem.deg_theta() >= ipow(f->q, j)) {
            auto quo = try_exact_div(rem, bracket(f, j));
            if (!quo) break;
            rem = *quo;
            ++count;
        }
        if (count) {
            if (!s.empty()) s += "*";
            s += "[" + std::to_string(j) + "]";
            if (count > 1) s += "^" + std::to_string(count);
        }
        if (j == 1) break;
    }
    if (!rem.is_constant() || rem.is_zero()) return std::nullopt;
    FqElem c = rem.coeff(0, 0);
    if (s.empty()) return f->text(c);
    if (c.v != 1) s = f->text(c) + "*" + s;
    return s;
}

inline std::string theta_poly_text(const BiPoly& a) {
    if (a.is_zero()) return "0";
    std::string s;
    const auto& ts = a.terms();
    for (size_t i = ts.size(); i-- > 0;) {
        if (!s.empty()) s += "+";
        bool unit = ts[i].c.v == 1 && ts[i].dth != 0;
        if (!unit) s += a.field()->text(ts[i].c);
        if (ts[i].dth != 0) {
            if (!unit) s += "*";
            s += "theta";
            if (ts[i].dth != 1) s += "^" + std::to_string(ts[i].dth);
        }
    }
    return s;
}

inline std::string to_string(const IsobaricPoly& p) {
    if (p.terms.empty()) return "0";
    const Field& f = p.field;
    std::string s;
    for (const auto& [m, frac] : p.terms) {
        BiPoly num = frac.num;
        bool negative = false;
        if (f->p > 2 && !num.is_zero() && num.terms().back().c.v == f->p - 1) {
            negative = true;
            num = -num;
        }
        if (s.empty())
            s += negative ? "-" : "";
        else
            s += negative ? " - " : " + ";
        std::string numtext = num.is_constant() ? f->text(num.coeff(0, 0)) : theta_poly_text(num);
        std::string dentext;
        if (!(frac.den == BiPoly::one(f))) {
            auto b = bracket_product_text(frac.den);
            dentext = b ? *b : "(" + theta_poly_text(frac.den) + ")";
        }
        std::string coeff;
        if (dentext.empty())
            coeff = numtext == "1" ? "" : numtext;
        else
            coeff = "(" + numtext + "/" + dentext + ")";
        std::string mono;
        auto append_power = [&](const char* sym, int64_t e) {
            if (e == 0) return;
            if (!mono.empty()) mono += "*";
            mono += sym;
            if (e > 1) mono += "^" + std::to_string(e);
        };
        append_power("E", m.a);
        append_power("g", m.b);
        append_power("h", m.c);
        if (mono.empty()) mono = "1";
        s += coeff.empty() ? mono : coeff + "*" + mono;
    }
    return s;
}

}  // namespace hankel
