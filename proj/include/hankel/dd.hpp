#pragma once

// The deformation series d = sum c_s v^s (v = u^(q-1)) defined by the
// difference equation (t - theta^q) Delta tau^2(X) + g tau(X) - X = 0 with
// c_0 = 1, computed by the convolution recursion
//   c_s = sum_{i+jq=s} gamma_i tau(c_j)
//       + (t - theta^q) sum_{i+jq^2=s} delta_i tau^2(c_j),
// plus the derived series E_bold = -h tau(d) and h_bold = h d and the
// residual checks for the difference equations they satisfy.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "carlitz.hpp"

namespace hankel {

struct DSeries {
    Field field;
    std::vector<BiPoly> c;  // c[s] = coefficient of v^s

    int64_t size() const { return static_cast<int64_t>(c.size()); }
};

// v-coefficients of a series supported on the (q-1)-lattice.
inline std::vector<BiPoly> v_coefficients(const USeries& a, int64_t S) {
    int64_t step = a.field()->q - 1;
    if (step * (S - 1) >= a.precision())
        throw std::invalid_argument("series precision too small for requested v-coefficients");
    if (!in_v_lattice(a) || (!a.is_zero_to_prec() && a.valuation() < 0))
        throw std::invalid_argument("series is not in F_q[t,theta][[v]]");
    std::vector<BiPoly> out;
    out.reserve(static_cast<size_t>(S));
    for (int64_t s = 0; s < S; ++s) out.push_back(a.coeff_at(step * s));
    return out;
}

inline DSeries d_series(const GeneratorSet& gens, int64_t S) {
    if (S < 1) throw std::invalid_argument("need at least one coefficient");
    const Field& f = gens.field;
    int64_t q = f->q;
    std::vector<BiPoly> gamma = v_coefficients(gens.g, S);
    std::vector<BiPoly> delta = v_coefficients(gens.delta, S);
    BiPoly t_minus_thq = BiPoly::t(f) - BiPoly::theta(f, q);

    DSeries d{f, {}};
    d.c.assign(static_cast<size_t>(S), BiPoly(f));
    d.c[0] = BiPoly::one(f);
    std::vector<BiPoly> tc(static_cast<size_t>(S), BiPoly(f));   // tau c_j
    std::vector<BiPoly> t2c(static_cast<size_t>(S), BiPoly(f));  // tau^2 c_j
    tc[0] = BiPoly::one(f);
    t2c[0] = BiPoly::one(f);

    BiPolyAccumulator acc(f);
    for (int64_t s = 1; s < S; ++s) {
        bool any = false;
        for (int64_t j = 0; j * q <= s; ++j) {
            const BiPoly& gi = gamma[static_cast<size_t>(s - j * q)];
            if (gi.is_zero() || tc[static_cast<size_t>(j)].is_zero()) continue;
            acc.add_product(gi, tc[static_cast<size_t>(j)]);
            any = true;
        }
        BiPoly first = any ? acc.take() : BiPoly(f);
        any = false;
        for (int64_t j = 0; j * q * q <= s; ++j) {
            const BiPoly& di = delta[static_cast<size_t>(s - j * q * q)];
            if (di.is_zero() || t2c[static_cast<size_t>(j)].is_zero()) continue;
            acc.add_product(di, t2c[static_cast<size_t>(j)]);
            any = true;
        }
        d.c[static_cast<size_t>(s)] = any ? first + t_minus_thq * acc.take() : first;
        tc[static_cast<size_t>(s)] = frobenius_theta(d.c[static_cast<size_t>(s)]);
        t2c[static_cast<size_t>(s)] = frobenius_theta(tc[static_cast<size_t>(s)]);
    }
    return d;
}

// Re-indexes v^s -> u^((q-1)s). With S coefficients the series is known to
// u-precision (q-1)S: the in-between exponents are exactly zero by the
// lattice structure.
inline USeries d_as_useries(const DSeries& d, int64_t prec = -1) {
    int64_t step = d.field->q - 1;
    int64_t full = step * d.size();
    if (prec < 0) prec = full;
    if (prec > full) throw std::invalid_argument("not enough v-coefficients for precision");
    std::vector<BiPoly> w(static_cast<size_t>(full), BiPoly(d.field));
    for (int64_t s = 0; s < d.size(); ++s) w[static_cast<size_t>(step * s)] = d.c[static_cast<size_t>(s)];
    return USeries::from_window(d.field, 0, std::move(w), full).truncated(prec);
}

// d, its u-expansion, and the deformed generators at a shared precision.
struct Deformation {
    DSeries d;
    USeries d_u;
    USeries Ebold;  // -h tau(d)
    USeries hbold;  // h d
};

inline Deformation make_deformation(const GeneratorSet& gens, int64_t prec) {
    if (prec > gens.prec) throw std::invalid_argument("generator precision too small");
    int64_t step = gens.field->q - 1;
    int64_t S = (prec + step - 1) / step;
    Deformation def{d_series(gens, S), {}, {}, {}};
    def.d_u = d_as_useries(def.d, prec);
    def.Ebold = (-(gens.h * tau(def.d_u))).truncated(prec);
    def.hbold = (gens.h * def.d_u).truncated(prec);
    return def;
}

// Outcome of a residual check: ok, or the first failing u-exponent together
// with the window actually verified.
struct Witness {
    bool ok = true;
    int64_t first_fail = 0;
    int64_t verified_to = 0;
    std::string note;

    static Witness zero_to(const USeries& residual, int64_t want) {
        Witness w;
        w.verified_to = std::min(want, residual.precision());
        if (!residual.is_zero_to_prec() && residual.valuation() < w.verified_to) {
            w.ok = false;
            w.first_fail = residual.valuation();
        }
        return w;
    }

    static Witness equal(const USeries& a, const USeries& b, int64_t want) {
        Witness w;
        w.verified_to = std::min({want, a.precision(), b.precision()});
        auto m = first_mismatch(a.truncated(w.verified_to), b.truncated(w.verified_to));
        if (m) {
            w.ok = false;
            w.first_fail = *m;
        }
        return w;
    }
};

// (t - theta^q) Delta tau^2(X) + g tau(X) - X on a candidate X.
inline Witness check_dd_equation(const GeneratorSet& gens, const USeries& x, int64_t prec) {
    BiPoly t_minus_thq = BiPoly::t(gens.field) - BiPoly::theta(gens.field, gens.field->q);
    USeries lhs = (gens.delta * tau(x, 2)).scalar_mul(t_minus_thq) + gens.g * tau(x) - x;
    return Witness::zero_to(lhs, prec);
}

inline Witness check_dd_equation(const GeneratorSet& gens, const Deformation& def, int64_t prec) {
    return check_dd_equation(gens, def.d_u, prec);
}

// (t - theta^{q^2}) tau^2(E) = g^q tau(E) + Delta E.
inline Witness check_E_equation(const GeneratorSet& gens, const USeries& Ebold, int64_t prec) {
    const Field& f = gens.field;
    BiPoly t_minus_thq2 = BiPoly::t(f) - BiPoly::theta(f, ipow(f->q, 2));
    USeries lhs = tau(Ebold, 2).scalar_mul(t_minus_thq2) - frob_pow(gens.g, 1) * tau(Ebold) -
                  gens.delta * Ebold;
    return Witness::zero_to(lhs, prec);
}

// Delta^q h_bold = (t - theta^q) tau^2(h_bold) - g Delta^{q-1} tau(h_bold).
inline Witness check_h_equation(const GeneratorSet& gens, const USeries& hbold, int64_t prec) {
    const Field& f = gens.field;
    BiPoly t_minus_thq = BiPoly::t(f) - BiPoly::theta(f, f->q);
    USeries lhs = frob_pow(gens.delta, 1) * hbold - tau(hbold, 2).scalar_mul(t_minus_thq) +
                  gens.g * pow(gens.delta, f->q - 1) * tau(hbold);
    return Witness::zero_to(lhs, prec);
}

// The four twist identities tying E_bold and h_bold to the generators:
//   tau h = Delta E
//   (t - theta^q) tau E = g E + h     (checked through the exact division)
//   chi h = (t - theta)^q E^q - (g/Delta) h^q
//   chi E = h^q / Delta
inline std::array<Witness, 4> check_stability_formulas(const GeneratorSet& gens,
                                                       const USeries& Ebold,
                                                       const USeries& hbold, int64_t prec) {
    const Field& f = gens.field;
    std::array<Witness, 4> out;
    out[0] = Witness::equal(tau(hbold), gens.delta * Ebold, prec);

    BiPoly t_minus_thq = BiPoly::t(f) - BiPoly::theta(f, f->q);
    try {
        USeries quotient = exact_div_scalar((gens.g * Ebold + hbold).truncated(prec), t_minus_thq);
        out[1] = Witness::equal(tau(Ebold), quotient, prec);
    } catch (const NonExactCoefficient& e) {
        out[1].ok = false;
        out[1].first_fail = e.exponent;
        out[1].note = "division by t - theta^q not coefficient-exact";
    }

    USeries dinv = inverse(gens.delta);
    BiPoly tmth_q = bipoly_pow(BiPoly::t(f) - BiPoly::theta(f), f->q);
    USeries rhs2 = frob_pow(Ebold, 1).scalar_mul(tmth_q) - gens.g * dinv * frob_pow(hbold, 1);
    out[2] = Witness::equal(chi(hbold), rhs2, prec);

    out[3] = Witness::equal(chi(Ebold), frob_pow(hbold, 1) * dinv, prec);
    return out;
}

// indices 1 + q^2 + ... + q^(2(l-1)); zero for l = 0
inline int64_t milestone_index(uint32_t q, uint32_t l) {
    int64_t s = 0;
    for (uint32_t i = 0; i < l; ++i) s += ipow(q, 2 * i);
    return s;
}

// minimal l with s < 1 + q^2 + ... + q^(2l)
inline uint32_t degree_bound(uint32_t q, int64_t s) {
    uint32_t l = 0;
    while (milestone_index(q, l + 1) <= s) ++l;
    return l;
}

inline std::vector<std::pair<int64_t, int64_t>> c_degree_profile(const DSeries& d) {
    std::vector<std::pair<int64_t, int64_t>> out;
    out.reserve(d.c.size());
    for (int64_t s = 0; s < d.size(); ++s) out.emplace_back(s, d.c[static_cast<size_t>(s)].deg_t());
    return out;
}

}  // namespace hankel
