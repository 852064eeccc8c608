#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wedgelab {

// Dense row-major matrix over a runtime field object F. No floating point
// anywhere: entries stay closed under the field operations.
template <class F>
class Mat {
  public:
    using Elem = typename F::Elem;

    Mat(F field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), a_(rows * cols, field.zero()) {}

    static Mat identity(F field, std::size_t n) {
        Mat m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = field.one();
        return m;
    }

    static Mat from_rows(F field, const std::vector<std::vector<Elem>>& rows, std::size_t cols) {
        Mat m(field, rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw std::invalid_argument("Mat: ragged rows");
            for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const F& field() const { return field_; }

    Elem& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const Elem& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    Elem* row_ptr(std::size_t r) { return a_.data() + r * cols_; }
    const Elem* row_ptr(std::size_t r) const { return a_.data() + r * cols_; }

    std::vector<Elem> row(std::size_t r) const {
        return std::vector<Elem>(row_ptr(r), row_ptr(r) + cols_);
    }

    void append_row(const std::vector<Elem>& v) {
        if (v.size() != cols_) throw std::invalid_argument("Mat: appended row has wrong length");
        a_.insert(a_.end(), v.begin(), v.end());
        ++rows_;
    }

    Mat transposed() const {
        Mat t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Mat: dimension mismatch in product");
        Mat r(field_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Elem& x = at(i, k);
                if (field_.is_zero(x)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) = field_.add(r.at(i, j), field_.mul(x, o.at(k, j)));
            }
        return r;
    }

    std::vector<Elem> apply(const std::vector<Elem>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("Mat: vector length mismatch");
        std::vector<Elem> r(rows_, field_.zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                r[i] = field_.add(r[i], field_.mul(at(i, j), v[j]));
        return r;
    }

    bool operator==(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_ || !(field_ == o.field_)) return false;
        for (std::size_t i = 0; i < a_.size(); ++i)
            if (!field_.eq(a_[i], o.a_[i])) return false;
        return true;
    }

  private:
    F field_;
    std::size_t rows_, cols_;
    std::vector<Elem> a_;
};

template <class F>
struct RrefResult {
    Mat<F> R;
    std::size_t rank;
    std::vector<std::size_t> pivots;  // pivot column of each of the first `rank` rows
};

// Unique reduced row-echelon form. Row space is preserved; empty input gives rank 0.
template <class F>
RrefResult<F> rref(Mat<F> m) {
    const F& f = m.field();
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && f.is_zero(m.at(sel, c))) ++sel;
        if (sel == rows) continue;
        if (sel != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(m.at(sel, j), m.at(r, j));
        const auto piv_inv = f.inv(m.at(r, c));
        for (std::size_t j = c; j < cols; ++j) m.at(r, j) = f.mul(m.at(r, j), piv_inv);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || f.is_zero(m.at(i, c))) continue;
            const auto factor = m.at(i, c);
            for (std::size_t j = c; j < cols; ++j)
                m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), r, std::move(pivots)};
}

template <class F>
std::size_t rank(const Mat<F>& m) {
    return rref(m).rank;
}

// Rows form a basis (in RREF) of {x : M x = 0}; dim = cols - rank.
template <class F>
Mat<F> kernel_basis_mat(const Mat<F>& m) {
    const F& f = m.field();
    const std::size_t cols = m.cols();
    auto rr = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : rr.pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < cols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    Mat<F> k(f, free_cols.size(), cols);
    for (std::size_t t = 0; t < free_cols.size(); ++t) {
        const std::size_t fc = free_cols[t];
        k.at(t, fc) = f.one();
        for (std::size_t i = 0; i < rr.rank; ++i)
            k.at(t, rr.pivots[i]) = f.neg(rr.R.at(i, fc));
    }
    // Free columns descend left to right, so this is already echelon up to
    // row order; normalize through rref to keep the canonical form contract.
    return rref(std::move(k)).R;
}

// Incremental echelon span tracker; insert() reports whether the dimension grew.
template <class F>
class SpanAccumulator {
  public:
    using Elem = typename F::Elem;

    SpanAccumulator(F field, std::size_t ambient)
        : field_(field), ambient_(ambient), pivot_row_(ambient, SIZE_MAX) {}

    std::size_t dim() const { return rows_.size(); }
    std::size_t ambient() const { return ambient_; }

    bool insert(std::vector<Elem> v) {
        const F& f = field_;
        for (std::size_t c = 0; c < ambient_; ++c) {
            if (f.is_zero(v[c])) continue;
            std::size_t r = pivot_row_[c];
            if (r == SIZE_MAX) {
                const auto s = f.inv(v[c]);
                for (auto& x : v) x = f.mul(x, s);
                pivot_row_[c] = rows_.size();
                rows_.push_back(std::move(v));
                pivot_col_.push_back(c);
                return true;
            }
            const auto factor = v[c];
            const auto& row = rows_[r];
            for (std::size_t j = c; j < ambient_; ++j)
                v[j] = f.sub(v[j], f.mul(factor, row[j]));
        }
        return false;
    }

    bool contains(std::vector<Elem> v) const {
        const F& f = field_;
        for (std::size_t c = 0; c < ambient_; ++c) {
            if (f.is_zero(v[c])) continue;
            std::size_t r = pivot_row_[c];
            if (r == SIZE_MAX) return false;
            const auto factor = v[c];
            const auto& row = rows_[r];
            for (std::size_t j = c; j < ambient_; ++j)
                v[j] = f.sub(v[j], f.mul(factor, row[j]));
        }
        return true;
    }

    Mat<F> to_matrix() const {
        Mat<F> m(field_, rows_.size(), ambient_);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (std::size_t j = 0; j < ambient_; ++j) m.at(i, j) = rows_[i][j];
        return m;
    }

  private:
    F field_;
    std::size_t ambient_;
    std::vector<std::vector<Elem>> rows_;
    std::vector<std::size_t> pivot_col_;
    std::vector<std::size_t> pivot_row_;  // column -> row index or SIZE_MAX
};

}  // namespace wedgelab
