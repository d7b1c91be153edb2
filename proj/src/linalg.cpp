#include "hce/linalg.hpp"

#include <stdexcept>

namespace hce {

namespace {

// Bareiss fraction-free forward elimination on an integer matrix; returns
// row-echelon form rows (integer) and pivot columns.
void bareiss(std::vector<std::vector<Integer>>& a, std::vector<std::size_t>& pivots) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    Integer prev(1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[r], a[p]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                Integer v = a[i][j] * a[r][c] - a[i][c] * a[r][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                a[i][j] = v;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        pivots.push_back(c);
        ++r;
    }
    a.resize(r);
}

} // namespace

RatMatrix rref(const RatMatrix& in, std::vector<std::size_t>* pivot_cols) {
    const std::size_t cols = in.cols();
    std::vector<std::vector<Integer>> a;
    a.reserve(in.rows());
    for (const auto& row : in.m) {
        Integer l(1);
        for (const auto& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
        std::vector<Integer> irow(cols);
        bool nonzero = false;
        for (std::size_t j = 0; j < cols; ++j) {
            Rational v = row[j] * Rational(l);
            irow[j] = v.get_num();
            nonzero = nonzero || irow[j] != 0;
        }
        if (nonzero) a.push_back(std::move(irow));
    }
    std::vector<std::size_t> pivots;
    bareiss(a, pivots);

    RatMatrix out = RatMatrix::zero(a.size(), cols);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) out.m[i][j] = Rational(a[i][j]);
    // normalize pivots to 1 and eliminate above
    for (std::size_t i = out.rows(); i-- > 0;) {
        std::size_t pc = pivots[i];
        Rational pv = out.m[i][pc];
        for (std::size_t j = pc; j < cols; ++j) out.m[i][j] /= pv;
        for (std::size_t k = 0; k < i; ++k) {
            Rational f = out.m[k][pc];
            if (f == 0) continue;
            for (std::size_t j = pc; j < cols; ++j) out.m[k][j] -= f * out.m[i][j];
        }
    }
    if (pivot_cols) *pivot_cols = pivots;
    return out;
}

std::size_t rank(const RatMatrix& a) {
    std::vector<std::size_t> p;
    rref(a, &p);
    return p.size();
}

std::vector<std::vector<Rational>> nullspace(const RatMatrix& a) {
    std::vector<std::size_t> pivots;
    RatMatrix r = rref(a, &pivots);
    const std::size_t cols = a.cols();
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivots) is_pivot[c] = true;

    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r.m[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

bool same_row_space(const RatMatrix& a, const RatMatrix& b) {
    return rref(a).m == rref(b).m;
}

RatMatrix matmul(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul shape mismatch");
    RatMatrix c = RatMatrix::zero(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a.m[i][k] == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c.m[i][j] += a.m[i][k] * b.m[k][j];
        }
    return c;
}

Rational trace(const RatMatrix& a) {
    Rational t(0);
    for (std::size_t i = 0; i < a.rows() && i < a.cols(); ++i) t += a.m[i][i];
    return t;
}

} // namespace hce
