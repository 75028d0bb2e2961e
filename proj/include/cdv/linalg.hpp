#pragma once

#include <vector>

#include "cdv/rational.hpp"

namespace cdv {

using RatMatrix = std::vector<std::vector<Rat>>;

/// In-place fraction-friendly Gaussian elimination; returns the rank.
/// The matrix is left in row-echelon form with recorded pivot columns.
inline int row_echelon(RatMatrix& m, std::vector<int>* pivot_cols = nullptr) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[r], m[p]);
        Rat inv = Rat(1) / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        if (pivot_cols) pivot_cols->push_back(static_cast<int>(c));
        ++r;
    }
    return static_cast<int>(r);
}

inline int matrix_rank(RatMatrix m) { return row_echelon(m); }

/// Solves A x = b for square nonsingular A; throws internal_error otherwise.
inline std::vector<Rat> solve_linear(RatMatrix a, std::vector<Rat> b) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
    std::vector<int> pivots;
    int rank = row_echelon(a, &pivots);
    if (rank != static_cast<int>(n))
        throw internal_error("solve_linear: singular system");
    std::vector<Rat> x(n);
    for (std::size_t i = 0; i < n; ++i) x[pivots[i]] = a[i][n];
    return x;
}

}  // namespace cdv
