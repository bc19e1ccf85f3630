#pragma once

// Hankel-type determinants H_k(f) = det(chi^(i-1) tau^(j-1) f), their
// coefficient determinants d_s, Moore determinants, and the residual checks
// for the Sylvester-type identity, the divisibility of H_k coefficients by
// B_k(t), and the relation between H_k(E_bold) and H_k(d).

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dd.hpp"

namespace hankel {

constexpr uint32_t kMaxHankelOrder = 5;

// Cofactor expansion over column subsets: minors of the first r rows are
// built up once per subset instead of per permutation.
template <class T>
T subset_determinant(size_t k, const std::function<T(size_t, size_t)>& entry) {
    std::vector<std::optional<T>> dp(size_t{1} << k);
    for (size_t c = 0; c < k; ++c) dp[size_t{1} << c] = entry(0, c);
    for (uint32_t mask = 1; mask < (uint32_t{1} << k); ++mask) {
        int r = __builtin_popcount(mask) - 1;
        if (r == 0) continue;
        std::optional<T> acc;
        int idx = 0;
        for (size_t c = 0; c < k; ++c) {
            if (!(mask & (uint32_t{1} << c))) continue;
            T term = entry(static_cast<size_t>(r), c) * (*dp[mask ^ (uint32_t{1} << c)]);
            bool positive = ((r + idx) % 2) == 0;
            if (!acc)
                acc = positive ? std::move(term) : -term;
            else
                acc = positive ? *acc + term : *acc - term;
            ++idx;
        }
        dp[mask] = std::move(*acc);
    }
    return *dp[(size_t{1} << k) - 1];
}

inline USeries hankel_det(const USeries& f, uint32_t k) {
    if (k == 0 || k > kMaxHankelOrder)
        throw std::invalid_argument("hankel_det supports 1 <= k <= 5");
    if (k == 1) return f;
    std::vector<USeries> taus;
    taus.reserve(k);
    taus.push_back(f);
    for (uint32_t j = 1; j < k; ++j) taus.push_back(tau(f, j));
    std::function<USeries(size_t, size_t)> entry = [&](size_t i, size_t j) {
        return chi(taus[j], static_cast<uint32_t>(i));
    };
    return subset_determinant<USeries>(k, entry);
}

struct MultiIndex {
    std::vector<int64_t> s;

    size_t order() const { return s.size(); }
    int64_t weighted_norm(uint32_t q) const {
        int64_t n = 0, w = 1;
        for (int64_t si : s) {
            n += si * w;
            w *= q;
        }
        return n;
    }
};

// s_0 = (1+q^2+...+q^(2(k-2)), ..., 1+q^2, 1, 0)
inline MultiIndex s0_index(uint32_t q, uint32_t k) {
    MultiIndex m;
    for (uint32_t l = 1; l <= k; ++l) m.s.push_back(milestone_index(q, k - l));
    return m;
}

// d_s = det(c_{s_j}(t^{q^(i-1)}, theta^{q^(j-1)}))
inline BiPoly hankel_coeff_det(const Field& f, const MultiIndex& s,
                               const std::vector<BiPoly>& coeffs) {
    size_t k = s.order();
    if (k == 0 || k > kMaxHankelOrder)
        throw std::invalid_argument("hankel_coeff_det supports 1 <= k <= 5");
    std::vector<BiPoly> twisted(k, BiPoly(f));
    for (size_t j = 0; j < k; ++j) {
        int64_t sj = s.s[j];
        if (sj < 0 || sj >= static_cast<int64_t>(coeffs.size()))
            throw std::out_of_range("multi-index beyond available coefficients");
        twisted[j] = frobenius_theta(coeffs[static_cast<size_t>(sj)], static_cast<uint32_t>(j));
    }
    std::function<BiPoly(size_t, size_t)> entry = [&](size_t i, size_t j) {
        return frobenius_t(twisted[j], static_cast<uint32_t>(i));
    };
    return subset_determinant<BiPoly>(k, entry);
}

inline BiPoly hankel_coeff_det(const DSeries& d, const MultiIndex& s) {
    return hankel_coeff_det(d.field, s, d.c);
}

// M(nu_1, ..., nu_k) = det(t^(nu_j q^(i-1)))
inline BiPoly moore_det(const Field& f, const std::vector<int64_t>& nu) {
    size_t k = nu.size();
    if (k == 0 || k > kMaxHankelOrder)
        throw std::invalid_argument("moore_det supports 1 <= k <= 5");
    std::function<BiPoly(size_t, size_t)> entry = [&](size_t i, size_t j) {
        return BiPoly::t(f, nu[j] * ipow(f->q, static_cast<uint32_t>(i)));
    };
    return subset_determinant<BiPoly>(k, entry);
}

// All multi-indices of the given order with weighted norm <= cutoff.
inline std::vector<MultiIndex> multiindices_up_to(uint32_t q, uint32_t k, int64_t cutoff) {
    std::vector<MultiIndex> out;
    MultiIndex cur;
    cur.s.assign(k, 0);
    std::function<void(uint32_t, int64_t)> rec = [&](uint32_t pos, int64_t budget) {
        if (pos == k) {
            out.push_back(cur);
            return;
        }
        int64_t w = ipow(q, pos);
        for (int64_t v = 0; v * w <= budget; ++v) {
            cur.s[pos] = v;
            rec(pos + 1, budget - v * w);
        }
        cur.s[pos] = 0;
    };
    rec(0, cutoff);
    return out;
}

// H_k(E_bold) = (-1)^k h^((q^k-1)/(q-1)) tau(H_k(d))
inline Witness relationship_check(const GeneratorSet& gens, const Deformation& def, uint32_t k,
                                  int64_t prec) {
    USeries lhs = hankel_det(def.Ebold, k);
    USeries hd = hankel_det(def.d_u, k);
    uint64_t exponent = static_cast<uint64_t>((ipow(gens.field->q, k) - 1) / (gens.field->q - 1));
    USeries rhs = pow(gens.h, exponent) * tau(hd);
    if (k % 2) rhs = -rhs;
    return Witness::equal(lhs, rhs, prec);
}

// H_{s,k}^{q+1} - H_{s,k-1}^q H_{s,k+1} = H_{s-1,k}^q H_{s+1,k},
// with H_{s,k} = tau^s H_k(f); s >= 1 keeps all twists integral.
inline Witness sylvester_check(const USeries& f, uint32_t s, uint32_t k, int64_t prec) {
    if (s < 1) throw std::invalid_argument("sylvester_check needs s >= 1");
    if (k < 2 || k + 1 > kMaxHankelOrder)
        throw std::invalid_argument("sylvester_check needs 2 <= k <= 4");
    USeries hk = hankel_det(f, k);
    USeries hkm = hankel_det(f, k - 1);
    USeries hkp = hankel_det(f, k + 1);
    USeries lhs = pow(tau(hk, s), static_cast<uint64_t>(f.field()->q) + 1) -
                  frob_pow(tau(hkm, s), 1) * tau(hkp, s);
    USeries rhs = frob_pow(tau(hk, s - 1), 1) * tau(hk, s + 1);
    return Witness::equal(lhs, rhs, prec);
}

// B_k(t) divides every computed coefficient of H_k(f) for f in
// F_q[t,theta][[v]].
inline Witness divisibility_check(const USeries& f, uint32_t k, int64_t prec) {
    if (!in_v_lattice(f) || (!f.is_zero_to_prec() && f.valuation() < 0))
        throw std::invalid_argument("divisibility_check needs f in F_q[t,theta][[v]]");
    USeries h = hankel_det(f, k);
    BiPoly bk = bk_poly(f.field(), k, Var::t);
    Witness w;
    w.verified_to = std::min(prec, h.precision());
    if (h.is_zero_to_prec()) return w;
    for (int64_t e = h.valuation(); e < w.verified_to; ++e) {
        if (h.coeff_at(e).is_zero()) continue;
        if (!try_exact_div(h.coeff_at(e), bk)) {
            w.ok = false;
            w.first_fail = e;
            w.note = "coefficient not divisible by B_k(t)";
            return w;
        }
    }
    return w;
}

}  // namespace hankel
