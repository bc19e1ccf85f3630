#pragma once

// Shared helpers for the test suite: deterministic random polynomials and
// series, plus a rational-arithmetic Gaussian elimination used as the rank
// oracle against the fraction-free kernel.

#include <random>
#include <vector>

#include "hankel/polymatrix.hpp"
#include "hankel/useries.hpp"

namespace testsupport {

using namespace hankel;

inline BiPoly random_bipoly(std::mt19937_64& rng, const Field& f, int64_t max_dt,
                            int64_t max_dth, int terms) {
    std::uniform_int_distribution<int64_t> dt(0, max_dt), dth(0, max_dth);
    std::uniform_int_distribution<uint32_t> cv(0, f->q - 1);
    std::vector<BiPoly::Term> ts;
    for (int i = 0; i < terms; ++i) ts.push_back({dt(rng), dth(rng), FqElem{cv(rng)}});
    return BiPoly::from_terms(f, std::move(ts));
}

inline BiPoly random_theta_poly(std::mt19937_64& rng, const Field& f, int64_t max_deg,
                                int terms) {
    return random_bipoly(rng, f, 0, max_deg, terms);
}

// Random monic (in its leading variable) polynomial for division tests.
inline BiPoly random_monic(std::mt19937_64& rng, const Field& f, int64_t max_dt,
                           int64_t max_dth, int terms) {
    std::uniform_int_distribution<int> which(0, 1);
    BiPoly base = random_bipoly(rng, f, max_dt, max_dth, terms);
    bool in_t = which(rng) == 0;
    int64_t top = (in_t ? base.deg_t() : base.deg_theta()) + 1;
    BiPoly lead = in_t ? BiPoly::t(f, top) : BiPoly::theta(f, top);
    return base + lead;
}

inline USeries random_useries(std::mt19937_64& rng, const Field& f, int64_t val,
                              int64_t prec, int64_t max_dt, int64_t max_dth) {
    std::vector<BiPoly> w;
    for (int64_t e = val; e < prec; ++e) w.push_back(random_bipoly(rng, f, max_dt, max_dth, 3));
    return USeries::from_window(f, val, std::move(w), prec);
}

// Series in F_q[t,theta][[v]] with `ncoeffs` random v-coefficients, exact as
// a polynomial: precision prec with zeros beyond the support.
inline USeries random_v_series(std::mt19937_64& rng, const Field& f, int ncoeffs,
                               int64_t prec, int64_t max_dt = 2, int64_t max_dth = 2) {
    int64_t step = f->q - 1;
    std::vector<BiPoly> w(static_cast<size_t>(prec), BiPoly(f));
    w[0] = BiPoly::one(f);  // unit constant keeps valuation 0
    for (int s = 1; s < ncoeffs; ++s) {
        int64_t e = step * s;
        if (e < prec) w[static_cast<size_t>(e)] = random_bipoly(rng, f, max_dt, max_dth, 3);
    }
    return USeries::from_window(f, 0, std::move(w), prec);
}

// Rank via plain Gaussian elimination with explicit fractions.
inline size_t rational_rank(const PolyMatrix& m) {
    std::vector<std::vector<FracPoly>> a(m.rows(), std::vector<FracPoly>(m.cols()));
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c) a[r][c] = FracPoly(m.at(r, c));
    size_t rank = 0;
    for (size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
        size_t pivot = m.rows();
        for (size_t r = rank; r < m.rows(); ++r)
            if (!a[r][c].is_zero()) { pivot = r; break; }
        if (pivot == m.rows()) continue;
        std::swap(a[rank], a[pivot]);
        for (size_t r = rank + 1; r < m.rows(); ++r) {
            if (a[r][c].is_zero()) continue;
            FracPoly factor = a[r][c] / a[rank][c];
            for (size_t j = c; j < m.cols(); ++j) a[r][j] = a[r][j] - factor * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

}  // namespace testsupport
