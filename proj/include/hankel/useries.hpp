#pragma once

// Truncated Laurent series in u with BiPoly coefficients and explicit
// precision tracking. A series knows its coefficients on [val, prec) and is
// exactly zero below val; nothing is claimed at exponents >= prec. The
// zero-to-precision state (no nonzero coefficient anywhere below prec) is
// distinguished from "short window" and reported by is_zero_to_prec().
//
// Precision contracts: add keeps min(prec_a, prec_b); mul keeps
// min(prec_a + val_b, prec_b + val_a); tau maps precision P to q(P-1)+1.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bipoly.hpp"

namespace hankel {

struct NonUnitLeadingCoefficient : std::runtime_error {
    NonUnitLeadingCoefficient() : std::runtime_error("leading coefficient is not a unit of F_q") {}
};

struct NonExactCoefficient : std::runtime_error {
    int64_t exponent;
    BiPoly remainder;
    NonExactCoefficient(int64_t e, BiPoly rem)
        : std::runtime_error("non-exact coefficient division at exponent " + std::to_string(e)),
          exponent(e),
          remainder(std::move(rem)) {}
};

class USeries {
   public:
    USeries() = default;

    static USeries zero_to(Field f, int64_t prec) {
        USeries s;
        s.field_ = std::move(f);
        s.val_ = prec;
        s.prec_ = prec;
        return s;
    }

    static USeries from_window(Field f, int64_t val, std::vector<BiPoly> coeffs, int64_t prec) {
        if (prec - val != static_cast<int64_t>(coeffs.size()))
            throw std::invalid_argument("window size mismatch");
        USeries s;
        s.field_ = std::move(f);
        s.val_ = val;
        s.prec_ = prec;
        s.c_ = std::move(coeffs);
        s.normalize();
        return s;
    }

    static USeries monomial(Field f, BiPoly c, int64_t exp, int64_t prec) {
        if (exp >= prec) throw std::invalid_argument("monomial exponent beyond precision");
        std::vector<BiPoly> w(static_cast<size_t>(prec - exp), BiPoly::zero(f));
        w[0] = std::move(c);
        return from_window(std::move(f), exp, std::move(w), prec);
    }

    static USeries one(Field f, int64_t prec) {
        BiPoly c = BiPoly::one(f);
        return monomial(std::move(f), std::move(c), 0, prec);
    }

    static USeries u_power(Field f, int64_t exp, int64_t prec) {
        BiPoly c = BiPoly::one(f);
        return monomial(std::move(f), std::move(c), exp, prec);
    }

    const Field& field() const { return field_; }
    int64_t precision() const { return prec_; }
    bool is_zero_to_prec() const { return c_.empty(); }

    int64_t valuation() const {
        if (is_zero_to_prec()) throw std::domain_error("valuation of zero-to-precision series");
        return val_;
    }
    const BiPoly& leading() const {
        if (is_zero_to_prec()) throw std::domain_error("leading of zero-to-precision series");
        return c_.front();
    }

    // First exponent of the known window (== precision for zero series).
    int64_t window_start() const { return val_; }

    // Coefficient at exponent e; e must be below the precision.
    const BiPoly& coeff_at(int64_t e) const {
        if (e >= prec_) throw std::out_of_range("coefficient beyond precision");
        if (e < val_) return zero_poly();
        return c_[static_cast<size_t>(e - val_)];
    }

    friend USeries operator+(const USeries& a, const USeries& b) { return combined(a, b, false); }
    friend USeries operator-(const USeries& a, const USeries& b) { return combined(a, b, true); }

    USeries operator-() const {
        USeries r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }

    friend USeries operator*(const USeries& a, const USeries& b) {
        a.check_field(b);
        int64_t prec = std::min(a.prec_ + b.val_, b.prec_ + a.val_);
        if (a.is_zero_to_prec() || b.is_zero_to_prec()) return zero_to(a.field_, prec);
        int64_t val = a.val_ + b.val_;
        std::vector<BiPoly> out(static_cast<size_t>(prec - val), BiPoly(a.field_));
        BiPolyAccumulator acc(a.field_);
        for (int64_t n = val; n < prec; ++n) {
            int64_t ilo = std::max(a.val_, n - b.prec_ + 1);
            int64_t ihi = std::min(a.prec_ - 1, n - b.val_);
            bool any = false;
            for (int64_t i = ilo; i <= ihi; ++i) {
                const BiPoly& x = a.c_[static_cast<size_t>(i - a.val_)];
                if (x.is_zero()) continue;
                const BiPoly& y = b.c_[static_cast<size_t>(n - i - b.val_)];
                if (y.is_zero()) continue;
                acc.add_product(x, y);
                any = true;
            }
            if (any) out[static_cast<size_t>(n - val)] = acc.take();
        }
        return from_window(a.field_, val, std::move(out), prec);
    }

    USeries scalar_mul(const BiPoly& s) const {
        if (s.is_zero()) return zero_to(field_, prec_);
        USeries r = *this;
        for (auto& c : r.c_) {
            if (!c.is_zero()) c = c * s;
        }
        r.normalize();
        return r;
    }

    USeries truncated(int64_t prec) const {
        if (prec > prec_) throw std::invalid_argument("cannot raise precision by truncation");
        USeries r = *this;
        r.prec_ = prec;
        if (r.val_ >= prec) {
            r.val_ = prec;
            r.c_.clear();
        } else {
            r.c_.resize(static_cast<size_t>(prec - r.val_));
        }
        r.normalize();
        return r;
    }

    // Multiplication by u^n.
    USeries shifted(int64_t n) const {
        USeries r = *this;
        r.val_ += n;
        r.prec_ += n;
        return r;
    }

   private:
    Field field_;
    int64_t val_ = 0;
    int64_t prec_ = 0;
    std::vector<BiPoly> c_;

    static const BiPoly& zero_poly() {
        static const BiPoly z;
        return z;
    }

    void check_field(const USeries& o) const {
        if (!field_ || !o.field_ || !field_->same(*o.field_))
            throw std::invalid_argument("mixed-field series arithmetic");
    }

    void normalize() {
        size_t lead = 0;
        while (lead < c_.size() && c_[lead].is_zero()) ++lead;
        if (lead == c_.size()) {
            c_.clear();
            val_ = prec_;
            return;
        }
        if (lead) {
            c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
            val_ += static_cast<int64_t>(lead);
        }
    }

    static USeries combined(const USeries& a, const USeries& b, bool subtract) {
        a.check_field(b);
        int64_t prec = std::min(a.prec_, b.prec_);
        int64_t lo = std::min({a.val_, b.val_, prec});
        std::vector<BiPoly> out(static_cast<size_t>(prec - lo), BiPoly(a.field_));
        for (int64_t e = lo; e < prec; ++e) {
            BiPoly x = e >= a.val_ && e < a.prec_ ? a.c_[static_cast<size_t>(e - a.val_)]
                                                  : BiPoly::zero(a.field_);
            if (e >= b.val_ && e < b.prec_) {
                const BiPoly& y = b.c_[static_cast<size_t>(e - b.val_)];
                x = subtract ? x - y : x + y;
            }
            out[static_cast<size_t>(e - lo)] = std::move(x);
        }
        return from_window(a.field_, lo, std::move(out), prec);
    }

    friend USeries tau(const USeries&, uint32_t);
    friend USeries chi(const USeries&, uint32_t);
    friend USeries frob_pow(const USeries&, uint32_t);
    friend USeries inverse(const USeries&);
};

// tau: u -> u^(q^n), theta -> theta^(q^n); t fixed.
inline USeries tau(const USeries& a, uint32_t n = 1) {
    if (n == 0) return a;
    int64_t s = ipow(a.field()->q, n);
    int64_t prec = s * (a.precision() - 1) + 1;
    if (a.is_zero_to_prec()) return USeries::zero_to(a.field(), prec);
    int64_t val = s * a.valuation();
    std::vector<BiPoly> out(static_cast<size_t>(prec - val), BiPoly(a.field()));
    for (int64_t e = a.val_; e < a.prec_; ++e) {
        const BiPoly& c = a.c_[static_cast<size_t>(e - a.val_)];
        if (!c.is_zero()) out[static_cast<size_t>(s * e - val)] = frobenius_theta(c, n);
    }
    return USeries::from_window(a.field(), val, std::move(out), prec);
}

// chi: t -> t^(q^n); exponents and precision unchanged.
inline USeries chi(const USeries& a, uint32_t n = 1) {
    if (n == 0) return a;
    if (a.is_zero_to_prec()) return a;
    USeries r = a;
    for (auto& c : r.c_) {
        if (!c.is_zero()) c = frobenius_t(c, n);
    }
    return r;
}

// q^n-th power: coefficient-wise Frobenius with exponents scaled, which is
// sharper in precision than binary powering.
inline USeries frob_pow(const USeries& a, uint32_t n) {
    if (n == 0) return a;
    int64_t s = ipow(a.field()->q, n);
    int64_t prec = s * (a.precision() - 1) + 1;
    if (a.is_zero_to_prec()) return USeries::zero_to(a.field(), prec);
    int64_t val = s * a.valuation();
    std::vector<BiPoly> out(static_cast<size_t>(prec - val), BiPoly(a.field()));
    for (int64_t e = a.val_; e < a.prec_; ++e) {
        const BiPoly& c = a.c_[static_cast<size_t>(e - a.val_)];
        if (!c.is_zero()) out[static_cast<size_t>(s * e - val)] = frobenius_t(frobenius_theta(c, n), n);
    }
    return USeries::from_window(a.field(), val, std::move(out), prec);
}

inline USeries pow(const USeries& a, uint64_t n) {
    if (n == 0) {
        int64_t rel = a.precision() - a.window_start();
        return USeries::one(a.field(), std::max<int64_t>(rel, 1));
    }
    USeries r = a;
    uint64_t remaining = n - 1;
    USeries base = a;
    while (remaining) {
        if (remaining & 1) r = r * base;
        remaining >>= 1;
        if (remaining) base = base * base;
    }
    return r;
}

// Multiplicative inverse; requires the leading coefficient to be a nonzero
// element of F_q.
inline USeries inverse(const USeries& a) {
    if (a.is_zero_to_prec()) throw NonUnitLeadingCoefficient();
    const BiPoly& lc = a.leading();
    if (!lc.is_constant()) throw NonUnitLeadingCoefficient();
    const Field& f = a.field();
    FqElem c0 = lc.coeff(0, 0);
    FqElem c0inv = f->inv(c0);
    int64_t va = a.valuation();
    int64_t rel = a.precision() - va;
    std::vector<BiPoly> b(static_cast<size_t>(rel), BiPoly(f));
    b[0] = BiPoly::constant(f, c0inv);
    BiPolyAccumulator acc(f);
    for (int64_t n = 1; n < rel; ++n) {
        bool any = false;
        for (int64_t k = 0; k < n; ++k) {
            const BiPoly& bk = b[static_cast<size_t>(k)];
            if (bk.is_zero()) continue;
            const BiPoly& an = a.coeff_at(va + n - k);
            if (an.is_zero()) continue;
            acc.add_product(bk, an);
            any = true;
        }
        if (any) b[static_cast<size_t>(n)] = (-acc.take()).scaled(c0inv);
    }
    return USeries::from_window(f, -va, std::move(b), -va + rel);
}

// Divides every coefficient exactly by the scalar polynomial d.
inline USeries exact_div_scalar(const USeries& a, const BiPoly& d) {
    if (d.is_zero()) throw std::invalid_argument("division by zero polynomial");
    if (a.is_zero_to_prec()) return a;
    std::vector<BiPoly> out;
    out.reserve(static_cast<size_t>(a.precision() - a.valuation()));
    for (int64_t e = a.valuation(); e < a.precision(); ++e) {
        const BiPoly& c = a.coeff_at(e);
        if (c.is_zero()) {
            out.push_back(c);
            continue;
        }
        try {
            out.push_back(exact_div(c, d));
        } catch (const NonExactDivision& err) {
            throw NonExactCoefficient(e, err.remainder);
        }
    }
    return USeries::from_window(a.field(), a.valuation(), std::move(out), a.precision());
}

// Coefficient-wise image under t -> theta.
inline USeries specialize_t(const USeries& a) {
    if (a.is_zero_to_prec()) return a;
    std::vector<BiPoly> out;
    out.reserve(static_cast<size_t>(a.precision() - a.valuation()));
    for (int64_t e = a.valuation(); e < a.precision(); ++e) out.push_back(specialize_t(a.coeff_at(e)));
    return USeries::from_window(a.field(), a.valuation(), std::move(out), a.precision());
}

// True when every exponent with a nonzero coefficient is divisible by q-1.
inline bool in_v_lattice(const USeries& a) {
    int64_t m = a.field()->q - 1;
    if (m <= 1) return true;
    if (a.is_zero_to_prec()) return true;
    for (int64_t e = a.valuation(); e < a.precision(); ++e) {
        if (!a.coeff_at(e).is_zero() && ((e % m) + m) % m != 0) return false;
    }
    return true;
}

// First exponent below both precisions where the series differ.
inline std::optional<int64_t> first_mismatch(const USeries& a, const USeries& b) {
    int64_t prec = std::min(a.precision(), b.precision());
    int64_t lo = std::min({a.window_start(), b.window_start(), prec});
    for (int64_t e = lo; e < prec; ++e) {
        if (!(a.coeff_at(e) == b.coeff_at(e))) return e;
    }
    return std::nullopt;
}

inline bool equal_to_min_prec(const USeries& a, const USeries& b) {
    return !first_mismatch(a, b).has_value();
}

inline std::string to_string(const USeries& a) {
    if (a.is_zero_to_prec())
        return "O(u^" + std::to_string(a.precision()) + ")";
    std::string s;
    for (int64_t e = a.valuation(); e < a.precision(); ++e) {
        const BiPoly& c = a.coeff_at(e);
        if (c.is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += "(" + to_string(c) + ")*u^" + std::to_string(e);
    }
    if (s.empty()) s = "0";
    s += " + O(u^" + std::to_string(a.precision()) + ")";
    return s;
}

}  // namespace hankel
