#pragma once

// Matrices over F_q[theta] (t-free BiPoly entries) with fraction-free
// Bareiss elimination. Every division during elimination is exact, so all
// intermediate entries stay polynomial; the transform block records the row
// operations, giving each echelon row as an exact A-linear combination of
// the input rows.

#include <cstdint>
#include <utility>
#include <vector>

#include "bipoly.hpp"

namespace hankel {

class PolyMatrix {
   public:
    PolyMatrix() = default;
    PolyMatrix(Field f, size_t rows, size_t cols)
        : field_(std::move(f)), rows_(rows), cols_(cols), a_(rows * cols, BiPoly(field_)) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const Field& field() const { return field_; }

    BiPoly& at(size_t r, size_t c) { return a_[r * cols_ + c]; }
    const BiPoly& at(size_t r, size_t c) const { return a_[r * cols_ + c]; }

    static PolyMatrix identity(Field f, size_t n) {
        PolyMatrix m(f, n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = BiPoly::one(f);
        return m;
    }

    void swap_rows(size_t i, size_t j) {
        if (i == j) return;
        for (size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
    }

   private:
    Field field_;
    size_t rows_ = 0, cols_ = 0;
    std::vector<BiPoly> a_;
};

struct RowReduceResult {
    PolyMatrix echelon;
    std::vector<size_t> pivot_cols;   // increasing
    PolyMatrix transform;             // transform * input ~ echelon (rows rescaled)
    size_t rank = 0;
};

inline RowReduceResult row_reduce_ff(const PolyMatrix& input) {
    RowReduceResult res;
    res.echelon = input;
    res.transform = PolyMatrix::identity(input.field(), input.rows());
    PolyMatrix& M = res.echelon;
    PolyMatrix& T = res.transform;
    const size_t rows = M.rows(), cols = M.cols();
    BiPoly prev = BiPoly::one(input.field());

    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pr = rows;
        for (size_t i = r; i < rows; ++i) {
            if (!M.at(i, c).is_zero()) { pr = i; break; }
        }
        if (pr == rows) continue;
        M.swap_rows(r, pr);
        T.swap_rows(r, pr);
        const BiPoly piv = M.at(r, c);
        for (size_t i = r + 1; i < rows; ++i) {
            const BiPoly f = M.at(i, c);
            for (size_t j = c + 1; j < cols; ++j)
                M.at(i, j) = exact_div(piv * M.at(i, j) - f * M.at(r, j), prev);
            M.at(i, c) = BiPoly::zero(input.field());
            for (size_t j = 0; j < rows; ++j)
                T.at(i, j) = exact_div(piv * T.at(i, j) - f * T.at(r, j), prev);
        }
        prev = piv;
        res.pivot_cols.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

// Fractions over F_q[theta], reduced by gcd when both parts are t-free and
// normalized to a monic denominator.
struct FracPoly {
    BiPoly num, den;

    FracPoly() = default;
    explicit FracPoly(BiPoly n) : num(std::move(n)), den(BiPoly::one(num.field())) { reduce(); }
    FracPoly(BiPoly n, BiPoly d) : num(std::move(n)), den(std::move(d)) {
        if (den.is_zero()) throw std::invalid_argument("zero denominator");
        reduce();
    }
    static FracPoly zero(const Field& f) { return FracPoly(BiPoly::zero(f)); }
    static FracPoly one(const Field& f) { return FracPoly(BiPoly::one(f)); }

    const Field& field() const { return num.field(); }
    bool is_zero() const { return num.is_zero(); }

    void reduce() {
        if (num.is_zero()) {
            den = BiPoly::one(den.field());
            return;
        }
        if (num.is_t_free() && den.is_t_free()) {
            BiPoly g = gcd_theta(num, den);
            if (g.deg_theta() > 0) {
                num = exact_div(num, g);
                den = exact_div(den, g);
            }
        }
        // leading coefficient of the denominator normalized to 1
        FqElem lc = den.terms().back().c;
        if (lc.v != 1) {
            FqElem inv = num.field()->inv(lc);
            num = num.scaled(inv);
            den = den.scaled(inv);
        }
    }

    friend FracPoly operator+(const FracPoly& a, const FracPoly& b) {
        return FracPoly(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend FracPoly operator-(const FracPoly& a, const FracPoly& b) {
        return FracPoly(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend FracPoly operator*(const FracPoly& a, const FracPoly& b) {
        return FracPoly(a.num * b.num, a.den * b.den);
    }
    friend FracPoly operator/(const FracPoly& a, const FracPoly& b) {
        if (b.is_zero()) throw std::invalid_argument("division by zero fraction");
        return FracPoly(a.num * b.den, a.den * b.num);
    }
    FracPoly operator-() const {
        FracPoly r = *this;
        r.num = -r.num;
        return r;
    }
    friend bool operator==(const FracPoly& a, const FracPoly& b) {
        return a.num * b.den == b.num * a.den;
    }
    friend bool operator!=(const FracPoly& a, const FracPoly& b) { return !(a == b); }
};

// Solves M x = rhs over the fraction field, via fraction-free elimination of
// the augmented matrix followed by exact back-substitution. Returns nothing
// when the system is inconsistent; throws when rank < cols so no unique
// solution exists.
inline std::optional<std::vector<FracPoly>> linear_solve_ff(const PolyMatrix& M,
                                                            const std::vector<BiPoly>& rhs) {
    if (rhs.size() != M.rows()) throw std::invalid_argument("rhs size mismatch");
    PolyMatrix aug(M.field(), M.rows(), M.cols() + 1);
    for (size_t r = 0; r < M.rows(); ++r) {
        for (size_t c = 0; c < M.cols(); ++c) aug.at(r, c) = M.at(r, c);
        aug.at(r, M.cols()) = rhs[r];
    }
    RowReduceResult rr = row_reduce_ff(aug);
    for (size_t pc : rr.pivot_cols)
        if (pc == M.cols()) return std::nullopt;  // pivot in the rhs column
    if (rr.rank < M.cols())
        throw std::runtime_error("linear_solve_ff: rank deficient system");

    std::vector<FracPoly> x(M.cols(), FracPoly::zero(M.field()));
    for (size_t i = rr.rank; i-- > 0;) {
        size_t pc = rr.pivot_cols[i];
        FracPoly acc = FracPoly(rr.echelon.at(i, M.cols()));
        for (size_t j = pc + 1; j < M.cols(); ++j) {
            if (!rr.echelon.at(i, j).is_zero())
                acc = acc - FracPoly(rr.echelon.at(i, j)) * x[j];
        }
        x[pc] = acc / FracPoly(rr.echelon.at(i, pc));
    }
    return x;
}

}  // namespace hankel
