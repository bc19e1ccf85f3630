#pragma once

// Carlitz-module machinery: the twisted polynomials rho_a, the parameters
// u_a = 1/rho_a(1/u) attached to monic a in A = F_q[theta], and the
// generator series E, h, g, Delta assembled from sums over monic
// polynomials. Coefficients of everything here are t-free.

#include <cstdint>
#include <vector>

#include "useries.hpp"

namespace hankel {

struct MonicPoly {
    Field field;
    std::vector<FqElem> coeffs;  // ascending powers of theta; back() == 1

    int64_t degree() const { return static_cast<int64_t>(coeffs.size()) - 1; }

    BiPoly to_bipoly() const {
        std::vector<BiPoly::Term> ts;
        for (size_t i = 0; i < coeffs.size(); ++i)
            if (coeffs[i].v) ts.push_back({0, static_cast<int64_t>(i), coeffs[i]});
        return BiPoly::from_terms(field, std::move(ts));
    }
};

// All q^d monic polynomials of degree d, lexicographic in the coefficient
// vector with the highest-degree free coefficient most significant.
inline std::vector<MonicPoly> monic_enum(const Field& f, uint32_t d) {
    uint64_t count = 1;
    for (uint32_t i = 0; i < d; ++i) count *= f->q;
    std::vector<MonicPoly> out;
    out.reserve(count);
    for (uint64_t n = 0; n < count; ++n) {
        MonicPoly m{f, std::vector<FqElem>(d + 1, FqElem{0})};
        uint64_t v = n;
        for (uint32_t i = 0; i < d; ++i) {
            m.coeffs[i] = FqElem{static_cast<uint32_t>(v % f->q)};
            v /= f->q;
        }
        m.coeffs[d] = f->one();
        out.push_back(std::move(m));
    }
    return out;
}

// Coefficients of rho_a(x) on the basis x^(q^i), i = 0..deg(a). Built by
// Horner from rho_theta(x) = theta*x + x^q; the composition rule is
// (rho_theta o r)_j = theta*r_j + r_(j-1)^q.
inline std::vector<BiPoly> carlitz_rho(const MonicPoly& a) {
    const Field& f = a.field;
    std::vector<BiPoly> r;
    for (size_t i = a.coeffs.size(); i-- > 0;) {
        if (r.empty()) {
            r.push_back(BiPoly::constant(f, a.coeffs[i]));
            continue;
        }
        std::vector<BiPoly> nr(r.size() + 1, BiPoly(f));
        for (size_t j = 0; j < r.size(); ++j) {
            nr[j] += BiPoly::theta(f) * r[j];
            nr[j + 1] += frobenius_theta(r[j]);
        }
        nr[0] += BiPoly::constant(f, a.coeffs[i]);
        r = std::move(nr);
    }
    return r;
}

// u_a = u^(q^d) / P_a(u) with P_a(u) = u^(q^d) * rho_a(1/u), a polynomial
// with constant term 1. Valuation q^(deg a); coefficients in A.
inline USeries u_parameter(const MonicPoly& a, int64_t prec) {
    const Field& f = a.field;
    int64_t d = a.degree();
    int64_t v0 = ipow(f->q, static_cast<uint32_t>(d));
    if (prec <= v0) throw std::invalid_argument("precision must exceed q^deg(a)");
    std::vector<BiPoly> rho = carlitz_rho(a);
    int64_t rel = prec - v0;
    std::vector<BiPoly> w(static_cast<size_t>(rel), BiPoly(f));
    for (int64_t i = 0; i <= d; ++i) {
        int64_t e = v0 - ipow(f->q, static_cast<uint32_t>(i));
        if (e < rel) w[static_cast<size_t>(e)] += rho[static_cast<size_t>(i)];
    }
    USeries pa = USeries::from_window(f, 0, std::move(w), rel);
    return inverse(pa).shifted(v0);
}

namespace detail {

inline std::vector<MonicPoly> monics_below(const Field& f, int64_t prec) {
    std::vector<MonicPoly> all;
    for (uint32_t d = 0; ipow(f->q, d) < prec; ++d) {
        auto layer = monic_enum(f, d);
        all.insert(all.end(), layer.begin(), layer.end());
    }
    return all;
}

}  // namespace detail

// sum over monic a of a^(q^m) * u_a, truncated by degree: monic a with
// q^deg(a) >= prec start at exponent q^deg(a) and contribute nothing.
inline USeries power_sum(const Field& f, uint32_t m, int64_t prec) {
    std::vector<BiPoly> acc(static_cast<size_t>(prec - 1), BiPoly(f));
    for (const auto& a : detail::monics_below(f, prec)) {
        BiPoly scale = frobenius_theta(a.to_bipoly(), m);
        if (scale.is_zero()) continue;
        USeries ua = u_parameter(a, prec);
        for (int64_t e = ua.valuation(); e < prec; ++e) {
            const BiPoly& c = ua.coeff_at(e);
            if (!c.is_zero()) acc[static_cast<size_t>(e - 1)] += scale * c;
        }
    }
    return USeries::from_window(f, 1, std::move(acc), prec);
}

inline USeries series_E(const Field& f, int64_t prec) { return power_sum(f, 0, prec); }
inline USeries series_h(const Field& f, int64_t prec) { return -power_sum(f, 1, prec); }

// g = 1 - [1] * sum over monic a of u_a^(q-1).
inline USeries series_g(const Field& f, int64_t prec) {
    std::vector<BiPoly> acc(static_cast<size_t>(prec), BiPoly(f));
    acc[0] = BiPoly::one(f);
    BiPoly br = bracket(f, 1);
    for (const auto& a : detail::monics_below(f, prec)) {
        USeries uq = pow(u_parameter(a, prec), f->q - 1);
        for (int64_t e = uq.valuation(); e < std::min<int64_t>(prec, uq.precision()); ++e) {
            const BiPoly& c = uq.coeff_at(e);
            if (!c.is_zero()) acc[static_cast<size_t>(e)] -= br * c;
        }
    }
    return USeries::from_window(f, 0, std::move(acc), prec);
}

inline USeries series_delta(const Field& f, int64_t prec) {
    return (-pow(series_h(f, prec), f->q - 1)).truncated(prec);
}

// The generator series at a fixed precision, computed once and shared.
struct GeneratorSet {
    Field field;
    int64_t prec = 0;
    USeries E, g, h, delta;
};

inline GeneratorSet make_generators(const Field& f, int64_t prec) {
    GeneratorSet gs;
    gs.field = f;
    gs.prec = prec;
    std::vector<BiPoly> accE(static_cast<size_t>(prec - 1), BiPoly(f));
    std::vector<BiPoly> accH(static_cast<size_t>(prec - 1), BiPoly(f));
    std::vector<BiPoly> accG(static_cast<size_t>(prec), BiPoly(f));
    accG[0] = BiPoly::one(f);
    BiPoly br = bracket(f, 1);
    for (const auto& a : detail::monics_below(f, prec)) {
        BiPoly ap = a.to_bipoly();
        BiPoly aq = frobenius_theta(ap);
        USeries ua = u_parameter(a, prec);
        for (int64_t e = ua.valuation(); e < prec; ++e) {
            const BiPoly& c = ua.coeff_at(e);
            if (c.is_zero()) continue;
            accE[static_cast<size_t>(e - 1)] += ap * c;
            accH[static_cast<size_t>(e - 1)] -= aq * c;
        }
        USeries uq = pow(ua, f->q - 1);
        for (int64_t e = uq.valuation(); e < std::min<int64_t>(prec, uq.precision()); ++e) {
            const BiPoly& c = uq.coeff_at(e);
            if (!c.is_zero()) accG[static_cast<size_t>(e)] -= br * c;
        }
    }
    gs.E = USeries::from_window(f, 1, std::move(accE), prec);
    gs.h = USeries::from_window(f, 1, std::move(accH), prec);
    gs.g = USeries::from_window(f, 0, std::move(accG), prec);
    gs.delta = (-pow(gs.h, f->q - 1)).truncated(prec);
    return gs;
}

}  // namespace hankel
