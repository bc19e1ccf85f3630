#pragma once

// Sparse polynomials in F_q[t,theta]. Terms are kept sorted by (t-degree,
// theta-degree) ascending with no zero coefficients, so representations are
// canonical and equality is structural. The same type also serves F_q[t]
// and F_q[theta] as the t-free / theta-free special cases.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fq.hpp"

namespace hankel {

struct NonExactDivision;

inline int64_t ipow(int64_t base, uint32_t exp) {
    int64_t r = 1;
    for (uint32_t i = 0; i < exp; ++i) {
        if (r > (int64_t{1} << 61) / (base > 0 ? base : 1))
            throw std::overflow_error("exponent overflow");
        r *= base;
    }
    return r;
}

class BiPoly {
   public:
    struct Term {
        int64_t dt = 0;   // degree in t
        int64_t dth = 0;  // degree in theta
        FqElem c;
    };

    BiPoly() = default;
    explicit BiPoly(Field f) : field_(std::move(f)) {}

    static BiPoly zero(Field f) { return BiPoly(std::move(f)); }
    static BiPoly constant(Field f, int64_t n) {
        BiPoly r(f);
        FqElem c = f->from_int(n);
        if (c.v) r.terms_.push_back({0, 0, c});
        return r;
    }
    static BiPoly constant(Field f, FqElem c) {
        BiPoly r(std::move(f));
        if (c.v) r.terms_.push_back({0, 0, c});
        return r;
    }
    static BiPoly monomial(Field f, int64_t dt, int64_t dth, FqElem c) {
        BiPoly r(std::move(f));
        if (c.v) r.terms_.push_back({dt, dth, c});
        return r;
    }
    static BiPoly monomial(Field f, int64_t dt, int64_t dth, int64_t n) {
        FqElem c = f->from_int(n);
        return monomial(std::move(f), dt, dth, c);
    }
    static BiPoly t(Field f, int64_t power = 1) { return monomial(std::move(f), power, 0, 1); }
    static BiPoly theta(Field f, int64_t power = 1) { return monomial(std::move(f), 0, power, 1); }
    static BiPoly one(Field f) { return constant(std::move(f), 1); }

    const Field& field() const { return field_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    bool is_t_free() const {
        for (const auto& t : terms_)
            if (t.dt != 0) return false;
        return true;
    }
    bool is_theta_free() const {
        for (const auto& t : terms_)
            if (t.dth != 0) return false;
        return true;
    }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].dt == 0 && terms_[0].dth == 0); }

    // Degrees of the zero polynomial are reported as -1.
    int64_t deg_t() const {
        int64_t d = -1;
        for (const auto& t : terms_) d = std::max(d, t.dt);
        return d;
    }
    int64_t deg_theta() const {
        int64_t d = -1;
        for (const auto& t : terms_) d = std::max(d, t.dth);
        return d;
    }

    FqElem coeff(int64_t dt, int64_t dth) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), std::make_pair(dt, dth),
                                   [](const Term& a, const std::pair<int64_t, int64_t>& k) {
                                       return std::make_pair(a.dt, a.dth) < k;
                                   });
        if (it != terms_.end() && it->dt == dt && it->dth == dth) return it->c;
        return FqElem{0};
    }

    // The slice of all terms with t-degree == dt, as a t-free polynomial.
    BiPoly coeff_of_t(int64_t dt) const {
        BiPoly r(field_);
        for (const auto& t : terms_)
            if (t.dt == dt) r.terms_.push_back({0, t.dth, t.c});
        return r;
    }
    BiPoly coeff_of_theta(int64_t dth) const {
        BiPoly r(field_);
        for (const auto& t : terms_)
            if (t.dth == dth) r.terms_.push_back({t.dt, 0, t.c});
        std::sort(r.terms_.begin(), r.terms_.end(), term_less);
        return r;
    }

    friend bool operator==(const BiPoly& a, const BiPoly& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (size_t i = 0; i < a.terms_.size(); ++i) {
            const auto& x = a.terms_[i];
            const auto& y = b.terms_[i];
            if (x.dt != y.dt || x.dth != y.dth || x.c != y.c) return false;
        }
        return true;
    }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    BiPoly operator-() const {
        BiPoly r = *this;
        for (auto& t : r.terms_) t.c = field_->neg(t.c);
        return r;
    }

    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) { return merged(a, b, false); }
    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) { return merged(a, b, true); }
    BiPoly& operator+=(const BiPoly& b) { return *this = *this + b; }
    BiPoly& operator-=(const BiPoly& b) { return *this = *this - b; }

    BiPoly scaled(FqElem s) const {
        BiPoly r(field_);
        if (s.v == 0) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) {
            FqElem c = field_->mul(t.c, s);
            if (c.v) r.terms_.push_back({t.dt, t.dth, c});
        }
        return r;
    }

    friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
    BiPoly& operator*=(const BiPoly& b) { return *this = *this * b; }

    // Construction from unsorted/duplicated terms; fixes order and drops zeros.
    static BiPoly from_terms(Field f, std::vector<Term> ts) {
        BiPoly r(std::move(f));
        std::sort(ts.begin(), ts.end(), term_less);
        for (const auto& t : ts) {
            if (!r.terms_.empty() && r.terms_.back().dt == t.dt && r.terms_.back().dth == t.dth) {
                r.terms_.back().c = r.field_->add(r.terms_.back().c, t.c);
            } else {
                r.terms_.push_back(t);
            }
        }
        r.terms_.erase(std::remove_if(r.terms_.begin(), r.terms_.end(),
                                      [](const Term& t) { return t.c.v == 0; }),
                       r.terms_.end());
        return r;
    }

    static bool term_less(const Term& a, const Term& b) {
        return std::make_pair(a.dt, a.dth) < std::make_pair(b.dt, b.dth);
    }

   private:
    Field field_;
    std::vector<Term> terms_;

    static BiPoly merged(const BiPoly& a, const BiPoly& b, bool subtract) {
        const Field& f = a.field_ ? a.field_ : b.field_;
        BiPoly r(f);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            bool take_a;
            if (i == a.terms_.size()) take_a = false;
            else if (j == b.terms_.size()) take_a = true;
            else if (term_less(a.terms_[i], b.terms_[j])) take_a = true;
            else if (term_less(b.terms_[j], a.terms_[i])) take_a = false;
            else {
                FqElem bc = subtract ? f->neg(b.terms_[j].c) : b.terms_[j].c;
                FqElem c = f->add(a.terms_[i].c, bc);
                if (c.v) r.terms_.push_back({a.terms_[i].dt, a.terms_[i].dth, c});
                ++i;
                ++j;
                continue;
            }
            if (take_a) {
                r.terms_.push_back(a.terms_[i++]);
            } else {
                Term t = b.terms_[j++];
                if (subtract) t.c = f->neg(t.c);
                r.terms_.push_back(t);
            }
        }
        return r;
    }

    friend struct BiPolyAccumulator;
};

// Accumulates sums of products without re-sorting after every addition.
// Dense (t-degree x theta-degree) grid when the support is compact, hash map
// otherwise; finalized once into canonical form.
struct BiPolyAccumulator {
    explicit BiPolyAccumulator(Field f) : field(std::move(f)) {}

    void add_product(const BiPoly& a, const BiPoly& b) {
        if (a.is_zero() || b.is_zero()) return;
        ensure_mode(a, b);
        const FieldDesc& F = *field;
        if (dense_mode) {
            for (const auto& x : a.terms()) {
                for (const auto& y : b.terms()) {
                    size_t idx = static_cast<size_t>(x.dt + y.dt) * dense_cols +
                                 static_cast<size_t>(x.dth + y.dth);
                    FqElem& cell = dense[idx];
                    cell = F.add(cell, F.mul(x.c, y.c));
                }
            }
        } else {
            for (const auto& x : a.terms()) {
                for (const auto& y : b.terms()) {
                    uint64_t key = pack(x.dt + y.dt, x.dth + y.dth);
                    FqElem& cell = sparse[key];
                    cell = F.add(cell, F.mul(x.c, y.c));
                }
            }
        }
    }

    void add(const BiPoly& a) {
        BiPoly one_ = BiPoly::one(field);
        add_product(a, one_);
    }

    BiPoly take() {
        std::vector<BiPoly::Term> ts;
        if (dense_mode) {
            for (size_t i = 0; i < dense.size(); ++i) {
                if (dense[i].v) {
                    ts.push_back({static_cast<int64_t>(i / dense_cols),
                                  static_cast<int64_t>(i % dense_cols), dense[i]});
                }
            }
        } else {
            ts.reserve(sparse.size());
            for (const auto& [key, c] : sparse) {
                if (c.v) ts.push_back({static_cast<int64_t>(key >> 32),
                                       static_cast<int64_t>(key & 0xffffffffu), c});
            }
        }
        dense.clear();
        sparse.clear();
        started = false;
        return BiPoly::from_terms(field, std::move(ts));
    }

   private:
    Field field;
    bool started = false;
    bool dense_mode = false;
    size_t dense_cols = 0;
    std::vector<FqElem> dense;
    std::unordered_map<uint64_t, FqElem> sparse;

    static uint64_t pack(int64_t dt, int64_t dth) {
        return (static_cast<uint64_t>(dt) << 32) | static_cast<uint64_t>(dth);
    }

    void ensure_mode(const BiPoly& a, const BiPoly& b) {
        if (started) {
            if (dense_mode) grow_dense(a, b);
            return;
        }
        started = true;
        int64_t rows = a.deg_t() + b.deg_t() + 1;
        int64_t cols = a.deg_theta() + b.deg_theta() + 1;
        size_t area = static_cast<size_t>(rows) * static_cast<size_t>(cols);
        size_t work = a.size() * b.size();
        dense_mode = area <= 16 * work + 1024 && area < (1u << 24);
        if (dense_mode) {
            dense_cols = static_cast<size_t>(cols);
            dense.assign(static_cast<size_t>(rows) * dense_cols, FqElem{0});
        }
    }

    void grow_dense(const BiPoly& a, const BiPoly& b) {
        size_t rows = static_cast<size_t>(a.deg_t() + b.deg_t() + 1);
        size_t cols = static_cast<size_t>(a.deg_theta() + b.deg_theta() + 1);
        size_t cur_rows = dense.size() / (dense_cols ? dense_cols : 1);
        if (cols <= dense_cols && rows <= cur_rows) return;
        size_t new_cols = std::max(cols, dense_cols);
        size_t new_rows = std::max(rows, cur_rows);
        if (new_rows * new_cols >= (1u << 24)) {
            // fall back to the hash map, migrating accumulated cells
            for (size_t i = 0; i < dense.size(); ++i)
                if (dense[i].v)
                    sparse[pack(static_cast<int64_t>(i / dense_cols),
                                static_cast<int64_t>(i % dense_cols))] = dense[i];
            dense.clear();
            dense_mode = false;
            return;
        }
        std::vector<FqElem> nd(new_rows * new_cols, FqElem{0});
        for (size_t r = 0; r < cur_rows; ++r)
            for (size_t c = 0; c < dense_cols; ++c) nd[r * new_cols + c] = dense[r * dense_cols + c];
        dense = std::move(nd);
        dense_cols = new_cols;
    }
};

inline BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    const Field& f = a.field() ? a.field() : b.field();
    if (a.is_zero() || b.is_zero()) return BiPoly::zero(f);
    BiPolyAccumulator acc(f);
    acc.add_product(a, b);
    return acc.take();
}

inline BiPoly bipoly_pow(const BiPoly& a, uint64_t n) {
    BiPoly r = BiPoly::one(a.field());
    BiPoly base = a;
    while (n) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

// t -> t^(q^n); coefficients fixed (x^q = x on F_q).
inline BiPoly frobenius_t(const BiPoly& a, uint32_t n = 1) {
    if (n == 0) return a;
    int64_t s = ipow(a.field()->q, n);
    std::vector<BiPoly::Term> ts = a.terms();
    for (auto& t : ts) t.dt *= s;
    return BiPoly::from_terms(a.field(), std::move(ts));
}

// theta -> theta^(q^n).
inline BiPoly frobenius_theta(const BiPoly& a, uint32_t n = 1) {
    if (n == 0) return a;
    int64_t s = ipow(a.field()->q, n);
    std::vector<BiPoly::Term> ts = a.terms();
    for (auto& t : ts) t.dth *= s;
    return BiPoly::from_terms(a.field(), std::move(ts));
}

// Image under t -> theta.
inline BiPoly specialize_t(const BiPoly& a) {
    std::vector<BiPoly::Term> ts;
    ts.reserve(a.size());
    for (const auto& t : a.terms()) ts.push_back({0, t.dt + t.dth, t.c});
    return BiPoly::from_terms(a.field(), std::move(ts));
}

// [j] = theta^(q^j) - theta.
inline BiPoly bracket(const Field& f, uint32_t j) {
    if (j == 0) throw std::invalid_argument("bracket index must be >= 1");
    BiPoly r = BiPoly::theta(f, ipow(f->q, j)) - BiPoly::theta(f);
    return r;
}

enum class Var { t, theta };

// B_k = prod_{0 <= i < j < k} (X^(q^j) - X^(q^i)) in the chosen variable.
inline BiPoly bk_poly(const Field& f, uint32_t k, Var var = Var::t) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    BiPoly r = BiPoly::one(f);
    for (uint32_t j = 1; j < k; ++j) {
        for (uint32_t i = 0; i < j; ++i) {
            int64_t hi = ipow(f->q, j), lo = ipow(f->q, i);
            BiPoly factor = var == Var::t ? BiPoly::t(f, hi) - BiPoly::t(f, lo)
                                          : BiPoly::theta(f, hi) - BiPoly::theta(f, lo);
            r = r * factor;
        }
    }
    return r;
}

struct NonExactDivision : std::runtime_error {
    BiPoly remainder;
    NonExactDivision(std::string msg, BiPoly rem)
        : std::runtime_error(std::move(msg)), remainder(std::move(rem)) {}
};

// Quotient of an exact division f / d, by leading-monomial reduction in the
// lex order with t > theta. When f is a polynomial multiple of d this always
// terminates with zero remainder (single-divisor reduction is exact over a
// field); otherwise the reduction stalls and the stalled remainder is raised
// inside NonExactDivision. Callers treat that as a first-class signal, not a
// crash.
inline BiPoly exact_div(const BiPoly& f, const BiPoly& d) {
    if (d.is_zero()) throw std::invalid_argument("division by zero polynomial");
    if (d.is_constant()) {
        FqElem c = d.coeff(0, 0);
        return f.scaled(f.field()->inv(c));
    }
    const BiPoly::Term& lead = d.terms().back();
    const FieldDesc& F = *f.field();
    FqElem lc_inv = F.inv(lead.c);

    std::map<std::pair<int64_t, int64_t>, FqElem> rem;
    for (const auto& t : f.terms()) rem[{t.dt, t.dth}] = t.c;
    std::vector<BiPoly::Term> quot_terms;
    while (!rem.empty()) {
        auto top = *rem.rbegin();
        if (top.first.first < lead.dt || top.first.second < lead.dth) {
            std::vector<BiPoly::Term> rts;
            for (const auto& [k, c] : rem) rts.push_back({k.first, k.second, c});
            throw NonExactDivision("non-exact polynomial division",
                                   BiPoly::from_terms(f.field(), std::move(rts)));
        }
        BiPoly::Term qt{top.first.first - lead.dt, top.first.second - lead.dth,
                        F.mul(top.second, lc_inv)};
        quot_terms.push_back(qt);
        for (const auto& s : d.terms()) {
            std::pair<int64_t, int64_t> key{qt.dt + s.dt, qt.dth + s.dth};
            auto it = rem.find(key);
            FqElem cur = it == rem.end() ? FqElem{0} : it->second;
            FqElem nu = F.sub(cur, F.mul(qt.c, s.c));
            if (nu.v == 0) {
                if (it != rem.end()) rem.erase(it);
            } else if (it == rem.end()) {
                rem.emplace(key, nu);
            } else {
                it->second = nu;
            }
        }
    }
    return BiPoly::from_terms(f.field(), std::move(quot_terms));
}

inline std::optional<BiPoly> try_exact_div(const BiPoly& f, const BiPoly& d) {
    try {
        return exact_div(f, d);
    } catch (const NonExactDivision&) {
        return std::nullopt;
    }
}

// gcd over F_q[theta] for t-free inputs, monic-normalized.
inline BiPoly gcd_theta(const BiPoly& a, const BiPoly& b) {
    if (!a.is_t_free() || !b.is_t_free())
        throw std::invalid_argument("gcd_theta requires t-free polynomials");
    const Field& f = a.field() ? a.field() : b.field();
    auto to_dense = [&](const BiPoly& x) {
        std::vector<FqElem> d(static_cast<size_t>(std::max<int64_t>(x.deg_theta() + 1, 0)), FqElem{0});
        for (const auto& t : x.terms()) d[static_cast<size_t>(t.dth)] = t.c;
        return d;
    };
    auto trim = [](std::vector<FqElem>& d) {
        while (!d.empty() && d.back().v == 0) d.pop_back();
    };
    std::vector<FqElem> A = to_dense(a), B = to_dense(b);
    trim(A);
    trim(B);
    while (!B.empty()) {
        FqElem lcinv = f->inv(B.back());
        while (A.size() >= B.size() && !A.empty()) {
            FqElem c = f->mul(A.back(), lcinv);
            size_t shift = A.size() - B.size();
            for (size_t i = 0; i < B.size(); ++i)
                A[shift + i] = f->sub(A[shift + i], f->mul(c, B[i]));
            trim(A);
        }
        std::swap(A, B);
    }
    BiPoly g(f);
    if (A.empty()) return g;
    FqElem lcinv = f->inv(A.back());
    std::vector<BiPoly::Term> ts;
    for (size_t i = 0; i < A.size(); ++i)
        if (A[i].v) ts.push_back({0, static_cast<int64_t>(i), f->mul(A[i], lcinv)});
    return BiPoly::from_terms(f, std::move(ts));
}

// Canonical text form: monomials c*t^i*theta^j sorted by (i, j) descending.
inline std::string to_string(const BiPoly& a) {
    if (a.is_zero()) return "0";
    std::string s;
    const auto& ts = a.terms();
    for (size_t i = ts.size(); i-- > 0;) {
        if (!s.empty()) s += " + ";
        s += a.field()->text(ts[i].c);
        s += "*t^" + std::to_string(ts[i].dt);
        s += "*theta^" + std::to_string(ts[i].dth);
    }
    return s;
}

inline BiPoly parse_bipoly(const Field& f, const std::string& s) {
    BiPoly r(f);
    if (s == "0") return r;
    std::vector<BiPoly::Term> ts;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find(" + ", pos);
        if (next == std::string::npos) next = s.size();
        std::string term = s.substr(pos, next - pos);
        size_t tp = term.find("*t^");
        size_t thp = term.find("*theta^", tp);
        if (tp == std::string::npos || thp == std::string::npos)
            throw std::invalid_argument("bad polynomial text: " + term);
        FqElem c = f->parse(term.substr(0, tp));
        int64_t dt = std::stoll(term.substr(tp + 3, thp - tp - 3));
        int64_t dth = std::stoll(term.substr(thp + 7));
        ts.push_back({dt, dth, c});
        pos = next == s.size() ? next : next + 3;
    }
    return BiPoly::from_terms(f, std::move(ts));
}

}  // namespace hankel
