#pragma once

#include <cstddef>
#include <vector>

#include "hce/rational.hpp"

namespace hce {

struct RatMatrix {
    std::vector<std::vector<Rational>> m;

    std::size_t rows() const { return m.size(); }
    std::size_t cols() const { return m.empty() ? 0 : m.front().size(); }
    static RatMatrix zero(std::size_t r, std::size_t c) {
        RatMatrix a;
        a.m.assign(r, std::vector<Rational>(c, Rational(0)));
        return a;
    }
    friend bool operator==(const RatMatrix& a, const RatMatrix& b) { return a.m == b.m; }
};

// Reduced row echelon form. Forward elimination is fraction-free (Bareiss,
// after clearing row denominators); back substitution restores rationals.
// Column order is the input order, so the result is canonical for the row
// space. Zero rows are dropped.
RatMatrix rref(const RatMatrix& a, std::vector<std::size_t>* pivot_cols = nullptr);

std::size_t rank(const RatMatrix& a);

// Nullspace basis of a (as column vectors, one per free column, identity on
// the free coordinates, free columns ascending).
std::vector<std::vector<Rational>> nullspace(const RatMatrix& a);

bool same_row_space(const RatMatrix& a, const RatMatrix& b);

RatMatrix matmul(const RatMatrix& a, const RatMatrix& b);
Rational trace(const RatMatrix& a);

} // namespace hce
