#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wedgelab/errors.hpp"
#include "wedgelab/matrix.hpp"
#include "wedgelab/subspace.hpp"

namespace wedgelab {

// Lexicographic coordinates on Lambda^2 and Lambda^4 of a d-dimensional space:
// pair index <-> ordered pair (i < j), quad index <-> 4-subset (i < j < k < l).
// The quadruple coefficient of a product of two bivectors uses the shuffle
// signs of the three pair-splits: +(ij|kl), -(ik|jl), +(il|jk).
class WedgeBasisIndex {
  public:
    explicit WedgeBasisIndex(std::size_t d) : d_(d) {
        pairs_.reserve(d * (d - 1) / 2);
        pair_index_.assign(d * d, SIZE_MAX);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j) {
                pair_index_[i * d + j] = pairs_.size();
                pairs_.push_back({i, j});
            }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                for (std::size_t k = j + 1; k < d; ++k)
                    for (std::size_t l = k + 1; l < d; ++l) quads_.push_back({i, j, k, l});
    }

    std::size_t dim() const { return d_; }
    std::size_t pair_count() const { return pairs_.size(); }
    std::size_t quad_count() const { return quads_.size(); }

    std::size_t pair_index(std::size_t i, std::size_t j) const { return pair_index_[i * d_ + j]; }
    const std::pair<std::size_t, std::size_t>& pair_at(std::size_t idx) const {
        return pairs_[idx];
    }
    const std::array<std::size_t, 4>& quad_at(std::size_t idx) const { return quads_[idx]; }

  private:
    std::size_t d_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::vector<std::array<std::size_t, 4>> quads_;
    std::vector<std::size_t> pair_index_;
};

// Coefficients of an element of Lambda^2 V over the C(d,2) pair basis.
template <class F>
struct Wedge2Vector {
    std::vector<typename F::Elem> c;

    bool is_zero(const F& f) const {
        for (const auto& x : c)
            if (!f.is_zero(x)) return false;
        return true;
    }
};

// Coefficients of an element of Lambda^4 V over the C(d,4) quadruple basis;
// empty for d < 4.
template <class F>
struct Wedge4Vector {
    std::vector<typename F::Elem> c;

    bool is_zero(const F& f) const {
        for (const auto& x : c)
            if (!f.is_zero(x)) return false;
        return true;
    }
};

// (u^v)_{ij} = u_i v_j - u_j v_i.
template <class F>
Wedge2Vector<F> wedge(const F& f, const std::vector<typename F::Elem>& u,
                      const std::vector<typename F::Elem>& v, const WedgeBasisIndex& wb) {
    if (u.size() != wb.dim() || v.size() != wb.dim())
        throw std::invalid_argument("wedge: vector length mismatch");
    Wedge2Vector<F> w;
    w.c.resize(wb.pair_count());
    for (std::size_t idx = 0; idx < wb.pair_count(); ++idx) {
        const auto [i, j] = wb.pair_at(idx);
        w.c[idx] = f.sub(f.mul(u[i], v[j]), f.mul(u[j], v[i]));
    }
    return w;
}

// Symmetric product Lambda^2 x Lambda^2 -> Lambda^4; wedge_square(w) = product(w, w).
template <class F>
Wedge4Vector<F> wedge2_product(const F& f, const Wedge2Vector<F>& a, const Wedge2Vector<F>& b,
                               const WedgeBasisIndex& wb) {
    Wedge4Vector<F> out;
    out.c.resize(wb.quad_count(), f.zero());
    for (std::size_t q = 0; q < wb.quad_count(); ++q) {
        const auto& s = wb.quad_at(q);
        const std::size_t ij = wb.pair_index(s[0], s[1]), kl = wb.pair_index(s[2], s[3]);
        const std::size_t ik = wb.pair_index(s[0], s[2]), jl = wb.pair_index(s[1], s[3]);
        const std::size_t il = wb.pair_index(s[0], s[3]), jk = wb.pair_index(s[1], s[2]);
        auto v = f.add(f.mul(a.c[ij], b.c[kl]), f.mul(a.c[il], b.c[jk]));
        v = f.sub(v, f.mul(a.c[ik], b.c[jl]));
        v = f.add(v, f.add(f.mul(b.c[ij], a.c[kl]), f.mul(b.c[il], a.c[jk])));
        v = f.sub(v, f.mul(b.c[ik], a.c[jl]));
        out.c[q] = v;
    }
    return out;
}

template <class F>
Wedge4Vector<F> wedge_square(const F& f, const Wedge2Vector<F>& w, const WedgeBasisIndex& wb) {
    return wedge2_product(f, w, w, wb);
}

// The alternating d x d matrix with upper triangle given by the pair coordinates.
template <class F>
Mat<F> alternating_matrix(const F& f, const Wedge2Vector<F>& w, const WedgeBasisIndex& wb) {
    Mat<F> m(f, wb.dim(), wb.dim());
    for (std::size_t idx = 0; idx < wb.pair_count(); ++idx) {
        const auto [i, j] = wb.pair_at(idx);
        m.at(i, j) = w.c[idx];
        m.at(j, i) = f.neg(w.c[idx]);
    }
    return m;
}

template <class F>
std::size_t alternating_rank(const F& f, const Wedge2Vector<F>& w, const WedgeBasisIndex& wb) {
    return rank(alternating_matrix(f, w, wb));
}

// True iff w != 0 and w = u^v for some u, v. Zero is declared non-decomposable.
// For d < 4 every nonzero bivector is decomposable (the square is identically
// zero there); for d >= 4 this is the w^w = 0 test, which in odd characteristic
// agrees with the alternating matrix having rank <= 2.
template <class F>
bool is_decomposable(const F& f, const Wedge2Vector<F>& w, const WedgeBasisIndex& wb) {
    if (w.is_zero(f)) return false;
    if (wb.dim() < 4) return true;
    return wedge_square(f, w, wb).is_zero(f);
}

// Factor a decomposable bivector as u^v with wedge(u, v) == w exactly. Takes
// the alternating-matrix route: the first two independent nonzero columns span
// the supporting plane; the scalar is absorbed into u.
template <class F>
std::pair<std::vector<typename F::Elem>, std::vector<typename F::Elem>> decompose(
    const F& f, const Wedge2Vector<F>& w, const WedgeBasisIndex& wb) {
    if (!is_decomposable(f, w, wb)) throw NotDecomposable("decompose: bivector is not u^v");
    const std::size_t d = wb.dim();
    auto m = alternating_matrix(f, w, wb);

    auto column = [&](std::size_t c) {
        std::vector<typename F::Elem> v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = m.at(i, c);
        return v;
    };
    auto is_zero_vec = [&](const std::vector<typename F::Elem>& v) {
        for (const auto& x : v)
            if (!f.is_zero(x)) return false;
        return true;
    };

    std::size_t c0 = 0;
    while (c0 < d && is_zero_vec(column(c0))) ++c0;
    auto u = column(c0);

    SpanAccumulator<F> span(f, d);
    span.insert(u);
    std::vector<typename F::Elem> v;
    for (std::size_t c = c0 + 1; c < d; ++c) {
        auto cand = column(c);
        if (is_zero_vec(cand) || span.contains(cand)) continue;
        v = std::move(cand);
        break;
    }
    if (v.empty()) throw NotDecomposable("decompose: rank < 2");

    // u^v is a scalar multiple of w; rescale u by comparing a nonzero coordinate.
    auto uv = wedge(f, u, v, wb);
    std::size_t idx = 0;
    while (f.is_zero(w.c[idx])) ++idx;
    const auto scale = f.div(w.c[idx], uv.c[idx]);
    for (auto& x : u) x = f.mul(x, scale);
    return {std::move(u), std::move(v)};
}

// For L <= Lambda^2 V with basis g_1..g_r: one symmetric r x r coefficient
// table per Lambda^4 basis index, with entries (g_i ^ g_j)_q, so that
// evaluating a^T Q a at coordinates a reproduces wedge_square(sum a_i g_i).
template <class F>
std::vector<Mat<F>> quadric_system(const Subspace<F>& L, const WedgeBasisIndex& wb) {
    const F& f = L.field();
    const std::size_t r = L.dim();
    std::vector<Wedge2Vector<F>> gens(r);
    for (std::size_t i = 0; i < r; ++i) gens[i].c = L.basis().row(i);

    // Entries are (g_i ^ g_j)_q; the product of 2-forms is symmetric, and the
    // diagonal (g_i ^ g_i)_q already carries the shuffle factor 2, so a^T Q a
    // equals wedge_square(sum a_i g_i) coordinate-wise with no polarization.
    std::vector<Mat<F>> tables(wb.quad_count(), Mat<F>(f, r, r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i; j < r; ++j) {
            auto prod = wedge2_product(f, gens[i], gens[j], wb);
            for (std::size_t q = 0; q < wb.quad_count(); ++q) {
                tables[q].at(i, j) = prod.c[q];
                tables[q].at(j, i) = prod.c[q];
            }
        }
    return tables;
}

template <class F>
Wedge4Vector<F> evaluate_quadric_system(const F& f, const std::vector<Mat<F>>& tables,
                                        const std::vector<typename F::Elem>& a) {
    Wedge4Vector<F> out;
    out.c.reserve(tables.size());
    for (const auto& q : tables) {
        auto acc = f.zero();
        for (std::size_t i = 0; i < q.rows(); ++i)
            for (std::size_t j = 0; j < q.cols(); ++j)
                acc = f.add(acc, f.mul(f.mul(a[i], a[j]), q.at(i, j)));
        out.c.push_back(acc);
    }
    return out;
}

}  // namespace wedgelab
