#pragma once

// Arithmetic in F_q, q = p^e. Elements are polynomials of degree < e over
// F_p, packed into a single integer in base p. Extension fields use a monic
// irreducible modulus; small fields get multiplication/inverse tables.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hankel {

struct FieldError : std::runtime_error {
    explicit FieldError(const std::string& msg) : std::runtime_error(msg) {}
};

struct FqElem {
    uint32_t v = 0;
    friend bool operator==(FqElem a, FqElem b) { return a.v == b.v; }
    friend bool operator!=(FqElem a, FqElem b) { return a.v != b.v; }
    friend bool operator<(FqElem a, FqElem b) { return a.v < b.v; }
};

class FieldDesc;
using Field = std::shared_ptr<const FieldDesc>;

class FieldDesc {
   public:
    uint32_t p;
    uint32_t e;
    uint32_t q;                      // p^e
    std::vector<uint32_t> modulus;   // degree-e monic, lowest first; empty when e == 1

    static Field make(uint32_t p, uint32_t e = 1,
                      std::optional<std::vector<uint32_t>> modulus = std::nullopt);

    bool same(const FieldDesc& o) const { return p == o.p && e == o.e && modulus == o.modulus; }

    FqElem zero() const { return FqElem{0}; }
    FqElem one() const { return FqElem{1}; }

    // Reduction of an arbitrary integer into F_p embedded in F_q.
    FqElem from_int(int64_t n) const {
        int64_t r = n % static_cast<int64_t>(p);
        if (r < 0) r += p;
        return FqElem{static_cast<uint32_t>(r)};
    }

    FqElem add(FqElem a, FqElem b) const {
        if (!add_lut_.empty()) return FqElem{add_lut_[a.v * q + b.v]};
        return add_slow(a, b);
    }
    FqElem sub(FqElem a, FqElem b) const { return add(a, neg(b)); }
    FqElem neg(FqElem a) const {
        if (!neg_lut_.empty()) return FqElem{neg_lut_[a.v]};
        return neg_slow(a);
    }
    FqElem mul(FqElem a, FqElem b) const {
        if (!mul_lut_.empty()) return FqElem{mul_lut_[a.v * q + b.v]};
        return mul_slow(a, b);
    }
    FqElem inv(FqElem a) const {
        if (a.v == 0) throw FieldError("inverse of zero");
        if (!inv_lut_.empty()) return FqElem{inv_lut_[a.v]};
        return pow(a, q - 2);
    }
    FqElem pow(FqElem a, uint64_t n) const {
        FqElem r = one(), base = a;
        while (n) {
            if (n & 1) r = mul(r, base);
            base = mul(base, base);
            n >>= 1;
        }
        return r;
    }

    std::vector<uint32_t> digits(FqElem a) const {
        std::vector<uint32_t> d(e, 0);
        uint32_t v = a.v;
        for (uint32_t i = 0; i < e; ++i) { d[i] = v % p; v /= p; }
        return d;
    }
    FqElem from_digits(const std::vector<uint32_t>& d) const {
        uint32_t v = 0;
        for (size_t i = d.size(); i-- > 0;) v = v * p + d[i] % p;
        return FqElem{v};
    }

    // Canonical text: e == 1 gives the digit; e > 1 a parenthesized polynomial
    // in w with explicit coefficients and exponents, highest power first.
    std::string text(FqElem a) const;
    FqElem parse(const std::string& s) const;

    std::string describe() const;  // "p^e" plus the modulus when e > 1

   private:
    std::vector<uint32_t> add_lut_, mul_lut_, neg_lut_, inv_lut_;

    FqElem add_slow(FqElem a, FqElem b) const;
    FqElem neg_slow(FqElem a) const;
    FqElem mul_slow(FqElem a, FqElem b) const;
    void build_luts();

    friend Field make_field_checked(uint32_t, uint32_t, std::optional<std::vector<uint32_t>>);
};

namespace detail {

inline bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Univariate arithmetic over F_p, used only for modulus validation.
using PPoly = std::vector<uint32_t>;  // lowest first, normalized (no top zeros)

inline void ppoly_trim(PPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PPoly ppoly_mulmod(const PPoly& a, const PPoly& b, const PPoly& m, uint32_t p) {
    size_t deg_m = m.size() - 1;
    PPoly r(a.size() + b.size() + 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + static_cast<uint64_t>(a[i]) * b[j]) % p;
    for (size_t i = r.size(); i-- > deg_m;) {
        uint32_t c = r[i];
        if (c == 0) continue;
        r[i] = 0;  // m is monic
        for (size_t j = 0; j < deg_m; ++j) {
            uint64_t sub = static_cast<uint64_t>(c) * m[j] % p;
            size_t idx = i - deg_m + j;
            r[idx] = static_cast<uint32_t>((r[idx] + p - sub) % p);
        }
    }
    r.resize(deg_m);
    return r;
}

inline PPoly ppoly_powmod(PPoly base, uint64_t n, const PPoly& m, uint32_t p) {
    PPoly r{1};
    r.resize(m.size() - 1, 0);
    base.resize(m.size() - 1, 0);
    while (n) {
        if (n & 1) r = ppoly_mulmod(r, base, m, p);
        base = ppoly_mulmod(base, base, m, p);
        n >>= 1;
    }
    return r;
}

inline PPoly ppoly_gcd(PPoly a, PPoly b, uint32_t p) {
    ppoly_trim(a);
    ppoly_trim(b);
    while (!b.empty()) {
        // a mod b, b monic-normalized on the fly
        uint32_t lc = b.back();
        uint32_t lcinv = 1;
        for (uint32_t x = 1; x < p; ++x)
            if (static_cast<uint64_t>(x) * lc % p == 1) { lcinv = x; break; }
        while (a.size() >= b.size() && !a.empty()) {
            uint32_t c = static_cast<uint32_t>(static_cast<uint64_t>(a.back()) * lcinv % p);
            size_t shift = a.size() - b.size();
            for (size_t j = 0; j < b.size(); ++j) {
                uint64_t sub = static_cast<uint64_t>(c) * b[j] % p;
                a[shift + j] = static_cast<uint32_t>((a[shift + j] + p - sub) % p);
            }
            ppoly_trim(a);
        }
        std::swap(a, b);
    }
    return a;
}

// Rabin irreducibility test for a monic degree-e polynomial over F_p.
inline bool is_irreducible(const PPoly& m, uint32_t p) {
    size_t e = m.size() - 1;
    if (e == 0) return false;
    PPoly x{0, 1};
    // x^(p^e) == x mod m
    PPoly xq = x;
    xq.resize(e, 0);
    for (size_t i = 0; i < e; ++i) xq = ppoly_powmod(xq, p, m, p);
    PPoly diff = xq;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    ppoly_trim(diff);
    if (!diff.empty()) return false;
    // gcd(x^(p^(e/r)) - x, m) == 1 for every prime r | e
    for (size_t r = 2; r <= e; ++r) {
        if (e % r != 0 || !is_prime(r)) continue;
        PPoly xr = x;
        xr.resize(e, 0);
        for (size_t i = 0; i < e / r; ++i) xr = ppoly_powmod(xr, p, m, p);
        PPoly d = xr;
        d.resize(std::max<size_t>(d.size(), 2), 0);
        d[1] = (d[1] + p - 1) % p;
        PPoly g = ppoly_gcd(d, m, p);
        if (g.size() != 1) return false;
    }
    return true;
}

inline std::optional<std::vector<uint32_t>> builtin_modulus(uint32_t p, uint32_t e) {
    if (p == 2 && e == 2) return std::vector<uint32_t>{1, 1, 1};        // w^2+w+1
    if (p == 2 && e == 3) return std::vector<uint32_t>{1, 1, 0, 1};     // w^3+w+1
    if (p == 2 && e == 4) return std::vector<uint32_t>{1, 1, 0, 0, 1};  // w^4+w+1
    if (p == 3 && e == 2) return std::vector<uint32_t>{1, 0, 1};        // w^2+1
    if (p == 3 && e == 3) return std::vector<uint32_t>{1, 2, 0, 1};     // w^3+2w+1
    if (p == 5 && e == 2) return std::vector<uint32_t>{2, 0, 1};        // w^2+2
    return std::nullopt;
}

}  // namespace detail

inline FqElem FieldDesc::add_slow(FqElem a, FqElem b) const {
    if (e == 1) return FqElem{static_cast<uint32_t>((static_cast<uint64_t>(a.v) + b.v) % p)};
    auto da = digits(a), db = digits(b);
    for (uint32_t i = 0; i < e; ++i) da[i] = (da[i] + db[i]) % p;
    return from_digits(da);
}

inline FqElem FieldDesc::neg_slow(FqElem a) const {
    if (e == 1) return FqElem{a.v == 0 ? 0 : p - a.v};
    auto da = digits(a);
    for (uint32_t i = 0; i < e; ++i) da[i] = (p - da[i]) % p;
    return from_digits(da);
}

inline FqElem FieldDesc::mul_slow(FqElem a, FqElem b) const {
    if (e == 1) return FqElem{static_cast<uint32_t>(static_cast<uint64_t>(a.v) * b.v % p)};
    auto da = digits(a), db = digits(b);
    std::vector<uint32_t> prod(2 * e, 0);
    for (uint32_t i = 0; i < e; ++i)
        for (uint32_t j = 0; j < e; ++j)
            prod[i + j] = (prod[i + j] + static_cast<uint64_t>(da[i]) * db[j]) % p;
    for (size_t i = prod.size(); i-- > e;) {
        uint32_t c = prod[i];
        if (c == 0) continue;
        prod[i] = 0;
        for (uint32_t j = 0; j < e; ++j) {
            uint64_t sub = static_cast<uint64_t>(c) * modulus[j] % p;
            prod[i - e + j] = static_cast<uint32_t>((prod[i - e + j] + p - sub) % p);
        }
    }
    prod.resize(e);
    return from_digits(prod);
}

inline void FieldDesc::build_luts() {
    if (q > 256) return;
    add_lut_.resize(static_cast<size_t>(q) * q);
    mul_lut_.resize(static_cast<size_t>(q) * q);
    neg_lut_.resize(q);
    inv_lut_.resize(q);
    for (uint32_t a = 0; a < q; ++a) {
        neg_lut_[a] = neg_slow(FqElem{a}).v;
        for (uint32_t b = 0; b < q; ++b) {
            add_lut_[a * q + b] = add_slow(FqElem{a}, FqElem{b}).v;
            mul_lut_[a * q + b] = mul_slow(FqElem{a}, FqElem{b}).v;
        }
    }
    inv_lut_[0] = 0;
    for (uint32_t a = 1; a < q; ++a) {
        for (uint32_t b = 1; b < q; ++b)
            if (mul_lut_[a * q + b] == 1) { inv_lut_[a] = b; break; }
    }
}

inline Field make_field_checked(uint32_t p, uint32_t e,
                                std::optional<std::vector<uint32_t>> modulus) {
    if (!detail::is_prime(p)) throw FieldError("p = " + std::to_string(p) + " is not prime");
    if (e == 0) throw FieldError("extension degree must be positive");
    uint64_t q = 1;
    for (uint32_t i = 0; i < e; ++i) {
        q *= p;
        if (q > (1u << 30)) throw FieldError("field too large");
    }
    auto fd = std::make_shared<FieldDesc>();
    fd->p = p;
    fd->e = e;
    fd->q = static_cast<uint32_t>(q);
    if (e > 1) {
        std::vector<uint32_t> m;
        if (modulus) {
            m = *modulus;
            for (auto& c : m) c %= p;
            detail::ppoly_trim(m);
        } else {
            auto built_in = detail::builtin_modulus(p, e);
            if (!built_in)
                throw FieldError("no built-in modulus for p=" + std::to_string(p) +
                                 ", e=" + std::to_string(e) + "; pass one explicitly");
            m = *built_in;
        }
        if (m.size() != e + 1 || m.back() != 1)
            throw FieldError("modulus must be monic of degree e");
        if (!detail::is_irreducible(m, p)) throw FieldError("modulus is reducible over F_p");
        fd->modulus = m;
    }
    fd->build_luts();
    return fd;
}

inline Field FieldDesc::make(uint32_t p, uint32_t e,
                             std::optional<std::vector<uint32_t>> modulus) {
    return make_field_checked(p, e, std::move(modulus));
}

inline Field field_make(uint32_t p, uint32_t e = 1,
                        std::optional<std::vector<uint32_t>> modulus = std::nullopt) {
    return FieldDesc::make(p, e, std::move(modulus));
}

inline std::string FieldDesc::text(FqElem a) const {
    if (e == 1) return std::to_string(a.v);
    if (a.v == 0) return "0";
    auto d = digits(a);
    std::string s = "(";
    bool first = true;
    for (size_t i = d.size(); i-- > 0;) {
        if (d[i] == 0) continue;
        if (!first) s += "+";
        s += std::to_string(d[i]) + "*w^" + std::to_string(i);
        first = false;
    }
    s += ")";
    return s;
}

inline FqElem FieldDesc::parse(const std::string& s) const {
    if (e == 1 || (s.find('w') == std::string::npos && s.find('(') == std::string::npos)) {
        return from_int(std::stoll(s));
    }
    std::string body = s;
    if (!body.empty() && body.front() == '(') body = body.substr(1, body.size() - 2);
    std::vector<uint32_t> d(e, 0);
    size_t pos = 0;
    while (pos < body.size()) {
        size_t next = body.find('+', pos);
        if (next == std::string::npos) next = body.size();
        std::string term = body.substr(pos, next - pos);
        size_t star = term.find("*w^");
        if (star == std::string::npos) throw FieldError("bad element text: " + s);
        uint32_t c = static_cast<uint32_t>(std::stoul(term.substr(0, star)));
        uint32_t k = static_cast<uint32_t>(std::stoul(term.substr(star + 3)));
        if (k >= e) throw FieldError("bad element text: " + s);
        d[k] = c % p;
        pos = next + 1;
    }
    return from_digits(d);
}

inline std::string FieldDesc::describe() const {
    std::string s = std::to_string(p);
    if (e > 1) {
        s += "^" + std::to_string(e) + "[";
        for (size_t i = 0; i < modulus.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(modulus[i]);
        }
        s += "]";
    }
    return s;
}

}  // namespace hankel
