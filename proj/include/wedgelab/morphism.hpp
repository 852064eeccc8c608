#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "wedgelab/bogomolov.hpp"
#include "wedgelab/errors.hpp"
#include "wedgelab/fields.hpp"
#include "wedgelab/subspace.hpp"
#include "wedgelab/wedge.hpp"

namespace wedgelab {

// An ordered r-tuple of 2-dimensional subspaces of V: a point of the domain
// of the decomposability morphism.
template <class F>
struct PlaneTuple {
    std::vector<Subspace<F>> planes;

    std::size_t r() const { return planes.size(); }
    std::size_t ambient() const { return planes.empty() ? 0 : planes[0].ambient_dim(); }
};

// (L_1, ..., L_r) -> Lambda^2 L_1 + ... + Lambda^2 L_r. Throws
// IndeterminacyLocus when the volume forms fail to span an r-dimensional
// subspace of Lambda^2 V.
template <class F>
Subspace<F> psi(const PlaneTuple<F>& t, const WedgeBasisIndex& wb) {
    const std::size_t r = t.r();
    if (r == 0) throw std::invalid_argument("psi: empty tuple");
    const F& f = t.planes[0].field();
    Mat<F> rows(f, 0, wb.pair_count());
    for (const auto& plane : t.planes) {
        if (plane.dim() != 2 || plane.ambient_dim() != wb.dim())
            throw std::invalid_argument("psi: tuple entries must be planes of V");
        rows.append_row(wedge(f, plane.basis().row(0), plane.basis().row(1), wb).c);
    }
    auto span = Subspace<F>::from_rows(std::move(rows));
    if (span.dim() != r)
        throw IndeterminacyLocus("psi: volume forms span only dimension " +
                                 std::to_string(span.dim()) + " < r = " + std::to_string(r));
    return span;
}

// True iff L is spanned by the decomposable vectors it contains.
bool in_image_of_psi(const Subspace<PrimeField>& L, const ClosureOptions& options = {});

template <class F>
struct DifferentialReport {
    Mat<F> matrix;             // rows: (basis of Psi(L)) x (coords of W/Psi(L));
                               // cols: for each plane, 2(d-2) basis maps
    std::size_t rank = 0;
    std::size_t domain_dim = 0;    // 2 r (d-2)
    std::size_t codomain_dim = 0;  // r (C(d,2) - r)
    bool is_submersion = false;    // rank == codomain_dim
    bool is_immersion = false;     // rank == domain_dim
    std::vector<bool> condition_check;  // per i: Psi(L) + (L_i ^ V) = W
};

// The explicit matrix of the tangent map: a basis map A of hom(L_i, V/L_i)
// sends the volume form x_i ^ y_i to A x_i ^ y_i + x_i ^ A y_i, read modulo
// Psi(L) in the complement coordinates. Complement bases are the non-pivot
// coordinates of the respective RREFs; ranks do not depend on that choice.
template <class F>
DifferentialReport<F> differential(const PlaneTuple<F>& t, const WedgeBasisIndex& wb) {
    const auto image = psi(t, wb);
    const F& f = image.field();
    const std::size_t r = t.r();
    const std::size_t d = wb.dim();
    const std::size_t m = wb.pair_count();
    const auto codomain_coords = image.non_pivots();  // m - r of them

    DifferentialReport<F> rep{Mat<F>(f, r * (m - r), 2 * r * (d - 2))};
    rep.domain_dim = 2 * r * (d - 2);
    rep.codomain_dim = r * (m - r);

    std::size_t col = 0;
    for (std::size_t i = 0; i < r; ++i) {
        const auto& plane = t.planes[i];
        const auto complement = plane.non_pivots();  // d - 2 coordinates of V/L_i
        for (std::size_t which = 0; which < 2; ++which) {
            const auto fixed = plane.basis().row(1 - which);  // the untouched basis vector
            for (const auto c : complement) {
                std::vector<typename F::Elem> unit(d, f.zero());
                unit[c] = f.one();
                // which == 0 moves x_i: (A x_i) ^ y_i; which == 1 moves y_i.
                auto img = which == 0 ? wedge(f, unit, fixed, wb) : wedge(f, fixed, unit, wb);
                auto residual = image.reduce(std::move(img.c));
                for (std::size_t tcoord = 0; tcoord < codomain_coords.size(); ++tcoord)
                    rep.matrix.at(i * (m - r) + tcoord, col) = residual[codomain_coords[tcoord]];
                ++col;
            }
        }
    }

    rep.rank = rank(rep.matrix);
    rep.is_submersion = rep.rank == rep.codomain_dim;
    rep.is_immersion = rep.rank == rep.domain_dim;

    rep.condition_check.resize(r);
    for (std::size_t i = 0; i < r; ++i) {
        const auto& plane = t.planes[i];
        Mat<F> rows(f, 0, m);
        for (std::size_t which = 0; which < 2; ++which)
            for (std::size_t k = 0; k < d; ++k) {
                std::vector<typename F::Elem> unit(d, f.zero());
                unit[k] = f.one();
                rows.append_row(wedge(f, plane.basis().row(which), unit, wb).c);
            }
        const auto li_wedge_v = Subspace<F>::from_rows(std::move(rows));
        rep.condition_check[i] = subspace_sum(image, li_wedge_v).dim() == m;
    }
    return rep;
}

// The explicit local-isomorphism point: L_1 = <e1, e2> and, for each pair
// 3 <= i < j <= d, L_{ij} = <e1 + lambda_{ij} e_i, e2 + lambda_{ij} e_j> with
// nonzero pairwise distinct scalars, giving r = C(d-2,2) + 1 planes. Lambdas
// are consumed in lexicographic pair order.
template <class F>
PlaneTuple<F> canonical_submersion_tuple(const F& f, unsigned d,
                                         const std::vector<typename F::Elem>& lambdas) {
    if (d < 4) throw std::invalid_argument("canonical_submersion_tuple: d >= 4 required");
    const std::size_t expected = static_cast<std::size_t>(d - 2) * (d - 3) / 2;
    if (lambdas.size() != expected)
        throw std::invalid_argument("canonical_submersion_tuple: need one scalar per pair, " +
                                    std::to_string(expected) + " total");
    for (std::size_t a = 0; a < lambdas.size(); ++a) {
        if (f.is_zero(lambdas[a]))
            throw std::invalid_argument("canonical_submersion_tuple: zero scalar");
        for (std::size_t b = a + 1; b < lambdas.size(); ++b)
            if (f.eq(lambdas[a], lambdas[b]))
                throw std::invalid_argument("canonical_submersion_tuple: repeated scalar");
    }

    PlaneTuple<F> t;
    std::vector<typename F::Elem> e1(d, f.zero()), e2(d, f.zero());
    e1[0] = f.one();
    e2[1] = f.one();
    t.planes.push_back(Subspace<F>::from_vectors(f, {e1, e2}, d));
    std::size_t at = 0;
    for (unsigned i = 2; i < d; ++i)
        for (unsigned j = i + 1; j < d; ++j) {
            auto u = e1, v = e2;
            u[i] = lambdas[at];
            v[j] = lambdas[at];
            ++at;
            t.planes.push_back(Subspace<F>::from_vectors(f, {u, v}, d));
        }
    return t;
}

template <class F>
inline constexpr bool kIsRationalField = std::is_same_v<F, RationalField>;

// Pair indices of Lambda^2 V spanning the standard complement U of the N
// leading 4-blocks: the wedges e_a ^ e_b with a, b not in the same block.
std::vector<std::size_t> standard_complement_indices(unsigned d, unsigned N);

// The block pattern <v1^v2 - v3^v4, v1^v3, v1^v4> inside block t, chosen for
// its p-independence; codimension 3 in the block with closure of dimension 2.
template <class F>
std::vector<std::vector<typename F::Elem>> block_pattern_vectors(const F& f,
                                                                 const WedgeBasisIndex& wb,
                                                                 unsigned block) {
    const unsigned base = 4 * block;
    std::vector<std::vector<typename F::Elem>> rows(3);
    for (auto& row : rows) row.assign(wb.pair_count(), f.zero());
    rows[0][wb.pair_index(base + 0, base + 1)] = f.one();
    rows[0][wb.pair_index(base + 2, base + 3)] = f.neg(f.one());
    rows[1][wb.pair_index(base + 0, base + 2)] = f.one();
    rows[2][wb.pair_index(base + 0, base + 3)] = f.one();
    return rows;
}

// X_1 + ... + X_N + L_choice: each X_t is the fixed codimension-3
// non-decomposably-generated subspace of the t-th block, and L_choice is any
// (r - 3N)-dimensional subspace of the standard complement U. Every result
// satisfies dim(result / result^) >= N.
template <class F>
Subspace<F> construct_nondecomposable(const F& f, unsigned d, unsigned r, unsigned N,
                                      const Subspace<F>& L_choice) {
    if (N < 1) throw std::invalid_argument("construct_nondecomposable: N >= 1 required");
    if (d < 4 * N) throw std::invalid_argument("construct_nondecomposable: d >= 4N required");
    if (r < 3 * N) throw std::invalid_argument("construct_nondecomposable: r >= 3N required");
    const WedgeBasisIndex wb(d);
    const std::size_t m = wb.pair_count();
    const std::size_t rho = m - r;
    if (kIsRationalField<F>) {
        if (rho < 5)
            throw std::invalid_argument(
                "construct_nondecomposable: the rational variant requires codimension >= 5");
    } else if (rho < 3 * N) {
        throw std::invalid_argument(
            "construct_nondecomposable: codimension >= 3N required");
    }
    const auto u_indices = standard_complement_indices(d, N);
    if (L_choice.ambient_dim() != m)
        throw std::invalid_argument("construct_nondecomposable: L_choice lives in Lambda^2 V");
    if (L_choice.dim() != r - 3 * N)
        throw std::invalid_argument("construct_nondecomposable: dim L_choice must be r - 3N");
    {
        std::vector<bool> in_u(m, false);
        for (auto idx : u_indices) in_u[idx] = true;
        for (std::size_t i = 0; i < L_choice.dim(); ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (!in_u[j] && !f.is_zero(L_choice.basis().at(i, j)))
                    throw std::invalid_argument(
                        "construct_nondecomposable: L_choice must lie in the standard "
                        "complement U");
    }

    Mat<F> rows(f, 0, m);
    for (unsigned t = 0; t < N; ++t)
        for (auto& row : block_pattern_vectors(f, wb, t)) rows.append_row(row);
    for (std::size_t i = 0; i < L_choice.dim(); ++i) rows.append_row(L_choice.basis().row(i));
    auto out = Subspace<F>::from_rows(std::move(rows));
    if (out.dim() != r)
        throw std::logic_error("construct_nondecomposable: blocks and L_choice overlap");
    return out;
}

// The count guarantee p^((r-3N)(rho-3N-1)) holds under the strict hypotheses
// d > 4N, r > 3N, rho > 3N + 1; absent, the construction still works but only
// trivial bounds are claimed.
std::optional<BigInt> lemma_count_bound(std::uint32_t p, unsigned d, unsigned r, unsigned N);

}  // namespace wedgelab
