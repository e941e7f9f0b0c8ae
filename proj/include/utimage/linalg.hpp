#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "utimage/rational.hpp"

namespace utimage {

// Dense matrix over Rat, row-major, 0-based. Sized for the small exact
// systems in this library (witness solves, span ranks, adjoint operators).
class MatQ {
  public:
    MatQ(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rat& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  private:
    std::size_t rows_, cols_;
    std::vector<Rat> data_;
};

inline int rank(MatQ a) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t piv = r;
        while (piv < a.rows() && a.at(piv, c) == 0) ++piv;
        if (piv == a.rows()) continue;
        if (piv != r)
            for (std::size_t k = c; k < a.cols(); ++k) std::swap(a.at(piv, k), a.at(r, k));
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            if (a.at(i, c) == 0) continue;
            Rat f = a.at(i, c) / a.at(r, c);
            for (std::size_t k = c; k < a.cols(); ++k) a.at(i, k) -= f * a.at(r, k);
        }
        ++r;
    }
    return static_cast<int>(r);
}

// Exact solve of a x = b. Any solution is returned (free variables pinned to
// zero); nullopt when inconsistent.
inline std::optional<std::vector<Rat>> solve_linear(MatQ a, std::vector<Rat> b) {
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t piv = r;
        while (piv < m && a.at(piv, c) == 0) ++piv;
        if (piv == m) continue;
        if (piv != r) {
            for (std::size_t k = c; k < n; ++k) std::swap(a.at(piv, k), a.at(r, k));
            std::swap(b[piv], b[r]);
        }
        Rat inv = Rat(1) / a.at(r, c);
        for (std::size_t k = c; k < n; ++k) a.at(r, k) *= inv;
        b[r] *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || a.at(i, c) == 0) continue;
            Rat f = a.at(i, c);
            for (std::size_t k = c; k < n; ++k) a.at(i, k) -= f * a.at(r, k);
            b[i] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < m; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<Rat> x(n, Rat(0));
    for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
    return x;
}

// Sparse column-index/value pairs, strictly increasing column ids.
using SparseVec = std::vector<std::pair<int, Rat>>;

inline SparseVec sparse_axpy(const SparseVec& x, const Rat& s, const SparseVec& y) {
    SparseVec r;
    r.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i].first < y[j].first) {
            r.push_back(x[i]);
            ++i;
        } else if (x[i].first > y[j].first) {
            r.emplace_back(y[j].first, s * y[j].second);
            ++j;
        } else {
            Rat v = x[i].second + s * y[j].second;
            if (v != 0) r.emplace_back(x[i].first, std::move(v));
            ++i, ++j;
        }
    }
    for (; i < x.size(); ++i) r.push_back(x[i]);
    for (; j < y.size(); ++j) r.emplace_back(y[j].first, s * y[j].second);
    return r;
}

// Incremental row-echelon form over Rat with exact arithmetic. Every accepted
// pivot row also carries the combination of original rows (by caller tag) it
// equals, so one elimination pass can later be replayed against any
// right-hand side. Rows are only reduced against pivots accepted before them;
// back-substitution orders pivots by descending column, which is sound
// because each stored row has entries only at columns >= its pivot.
class SparseEchelon {
  public:
    explicit SparseEchelon(int ncols) : ncols_(ncols) {}

    // Returns true when the row contributed a new pivot.
    bool add_row(SparseVec row, int tag) {
        std::vector<std::pair<int, Rat>> combo{{tag, Rat(1)}};
        for (;;) {
            auto hit = first_pivot_entry(row);
            if (!hit) break;
            auto [pos, ridx] = *hit;
            Rat f = -row[pos].second;
            row = sparse_axpy(row, f, rows_[ridx].cols);
            combo = merge_combo(combo, f, rows_[ridx].combo);
        }
        if (row.empty()) return false;
        Rat inv = Rat(1) / row.front().second;
        for (auto& [c, v] : row) v *= inv;
        for (auto& [t, v] : combo) v *= inv;
        row_by_pivot_[row.front().first] = static_cast<int>(rows_.size());
        rows_.push_back(Row{row.front().first, std::move(row), std::move(combo)});
        return true;
    }

    int rank() const { return static_cast<int>(rows_.size()); }
    bool full_rank() const { return rank() == ncols_; }

    // Solve M c = w using the pivot equations; requires full column rank.
    // Consistency of any skipped rows is the caller's burden.
    std::optional<std::vector<Rat>> solve(const std::unordered_map<int, Rat>& rhs) const {
        if (!full_rank()) return std::nullopt;
        std::vector<Rat> beta(rows_.size(), Rat(0));
        for (std::size_t r = 0; r < rows_.size(); ++r)
            for (auto& [tag, v] : rows_[r].combo)
                if (auto it = rhs.find(tag); it != rhs.end()) beta[r] += v * it->second;
        std::vector<Rat> x(ncols_, Rat(0));
        // pivots in descending column order; map is sorted ascending
        for (auto it = row_by_pivot_.rbegin(); it != row_by_pivot_.rend(); ++it) {
            const Row& row = rows_[it->second];
            Rat acc = beta[it->second];
            for (std::size_t k = 1; k < row.cols.size(); ++k)
                acc -= row.cols[k].second * x[row.cols[k].first];
            x[row.pivot] = std::move(acc);
        }
        return x;
    }

  private:
    struct Row {
        int pivot;
        SparseVec cols;
        std::vector<std::pair<int, Rat>> combo;  // sorted by tag
    };

    std::optional<std::pair<std::size_t, int>> first_pivot_entry(const SparseVec& row) const {
        for (std::size_t k = 0; k < row.size(); ++k)
            if (auto it = row_by_pivot_.find(row[k].first); it != row_by_pivot_.end())
                return std::make_pair(k, it->second);
        return std::nullopt;
    }

    static std::vector<std::pair<int, Rat>> merge_combo(
        const std::vector<std::pair<int, Rat>>& x, const Rat& s,
        const std::vector<std::pair<int, Rat>>& y) {
        return sparse_axpy(x, s, y);
    }

    int ncols_;
    std::vector<Row> rows_;
    std::map<int, int> row_by_pivot_;
};

}  // namespace utimage
