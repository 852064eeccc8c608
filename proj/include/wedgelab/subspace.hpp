#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wedgelab/matrix.hpp"

namespace wedgelab {

// A k-dimensional subspace of F^n held by its unique RREF basis, so equality
// of subspaces is entry-wise equality of bases. The zero-dimensional subspace
// (empty basis) is a legal value everywhere.
template <class F>
class Subspace {
  public:
    using Elem = typename F::Elem;

    static Subspace zero(F field, std::size_t ambient) {
        return Subspace(Mat<F>(field, 0, ambient), {});
    }

    static Subspace full(F field, std::size_t ambient) {
        std::vector<std::size_t> piv(ambient);
        for (std::size_t i = 0; i < ambient; ++i) piv[i] = i;
        return Subspace(Mat<F>::identity(field, ambient), std::move(piv));
    }

    // Span of the rows of `generators` (any spanning set; not required independent).
    static Subspace from_rows(Mat<F> generators) {
        auto rr = rref(std::move(generators));
        Mat<F> basis(rr.R.field(), rr.rank, rr.R.cols());
        for (std::size_t i = 0; i < rr.rank; ++i)
            for (std::size_t j = 0; j < rr.R.cols(); ++j) basis.at(i, j) = rr.R.at(i, j);
        return Subspace(std::move(basis), std::move(rr.pivots));
    }

    static Subspace from_vectors(F field, const std::vector<std::vector<Elem>>& vecs,
                                 std::size_t ambient) {
        return from_rows(Mat<F>::from_rows(field, vecs, ambient));
    }

    static Subspace line(F field, std::vector<Elem> v) {
        const std::size_t n = v.size();
        return from_vectors(field, {std::move(v)}, n);
    }

    std::size_t dim() const { return basis_.rows(); }
    std::size_t ambient_dim() const { return basis_.cols(); }
    const F& field() const { return basis_.field(); }
    const Mat<F>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    std::vector<std::size_t> non_pivots() const {
        std::vector<bool> is_pivot(ambient_dim(), false);
        for (auto c : pivots_) is_pivot[c] = true;
        std::vector<std::size_t> out;
        for (std::size_t c = 0; c < ambient_dim(); ++c)
            if (!is_pivot[c]) out.push_back(c);
        return out;
    }

    // v minus its projection onto the span; zero iff v is a member.
    std::vector<Elem> reduce(std::vector<Elem> v) const {
        const F& f = field();
        if (v.size() != ambient_dim()) throw std::invalid_argument("Subspace: length mismatch");
        for (std::size_t i = 0; i < dim(); ++i) {
            const auto c = pivots_[i];
            if (f.is_zero(v[c])) continue;
            const auto factor = v[c];
            for (std::size_t j = c; j < ambient_dim(); ++j)
                v[j] = f.sub(v[j], f.mul(factor, basis_.at(i, j)));
        }
        return v;
    }

    bool contains(const std::vector<Elem>& v) const {
        const F& f = field();
        auto res = reduce(v);
        for (const auto& x : res)
            if (!f.is_zero(x)) return false;
        return true;
    }

    bool contains(const Subspace& other) const {
        for (std::size_t i = 0; i < other.dim(); ++i)
            if (!contains(other.basis_.row(i))) return false;
        return true;
    }

    bool operator==(const Subspace& o) const { return basis_ == o.basis_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    // Row space of the kernel of the basis matrix; the double annihilator is
    // the original space, which sum/intersect rely on.
    Subspace annihilator() const { return from_rows(kernel_basis_mat(basis_)); }

  private:
    Subspace(Mat<F> basis, std::vector<std::size_t> pivots)
        : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

    Mat<F> basis_;
    std::vector<std::size_t> pivots_;
};

template <class F>
void check_compatible(const Subspace<F>& a, const Subspace<F>& b) {
    if (a.ambient_dim() != b.ambient_dim() || !(a.field() == b.field()))
        throw std::invalid_argument("Subspace: ambient space mismatch");
}

template <class F>
Subspace<F> subspace_sum(const Subspace<F>& a, const Subspace<F>& b) {
    check_compatible(a, b);
    Mat<F> stacked(a.field(), 0, a.ambient_dim());
    for (std::size_t i = 0; i < a.dim(); ++i) stacked.append_row(a.basis().row(i));
    for (std::size_t i = 0; i < b.dim(); ++i) stacked.append_row(b.basis().row(i));
    return Subspace<F>::from_rows(std::move(stacked));
}

template <class F>
Subspace<F> subspace_intersect(const Subspace<F>& a, const Subspace<F>& b) {
    check_compatible(a, b);
    return subspace_sum(a.annihilator(), b.annihilator()).annihilator();
}

template <class F>
Subspace<F> kernel_basis(const Mat<F>& m) {
    return Subspace<F>::from_rows(kernel_basis_mat(m));
}

}  // namespace wedgelab
