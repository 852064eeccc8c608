#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wedgelab/errors.hpp"
#include "wedgelab/fields.hpp"
#include "wedgelab/rng.hpp"
#include "wedgelab/subspace.hpp"

namespace wedgelab {

struct GaussianBinomial {
    BigInt value;
    BigInt lower_bound;  // p^(k(n-k) - k)
    BigInt upper_bound;  // p^(k(n-k) + k)
};

// |Gr(k, n)| over F_p, exact, with the elementary power bounds. Throws on k > n.
GaussianBinomial gaussian_binomial(unsigned n, unsigned k, std::uint32_t p);

inline constexpr std::uint64_t kDefaultEnumerationBudget = 100'000'000ull;

// Enumeration of Gr(k, n) over F_p in canonical RREF form: pivot-column
// patterns in colexicographic order, free entries odometer-style (last free
// cell fastest). Every subspace appears exactly once; runs are reproducible
// and chunkable by (pattern, odometer range).
class SubspaceStream {
  public:
    struct Pattern {
        std::vector<unsigned> pivot_cols;           // increasing
        std::vector<std::pair<unsigned, unsigned>> free_cells;  // (row, col)
        std::uint64_t count;                        // p^{#free_cells}
    };

    SubspaceStream(std::uint32_t p, unsigned k, unsigned n,
                   std::uint64_t budget = kDefaultEnumerationBudget);

    std::uint32_t p() const { return p_; }
    unsigned k() const { return k_; }
    unsigned n() const { return n_; }
    const std::vector<Pattern>& patterns() const { return patterns_; }
    const BigInt& total() const { return total_; }

    // Visits RREF basis matrices row-major in a reusable buffer of k*n entries.
    using Visitor = std::function<void(const PrimeField::Elem*)>;
    void for_each(const Visitor& fn) const;

    // The [from, to) slice of one pattern's odometer; basis of chunked runs.
    void for_each_in_pattern(const Pattern& pat, std::uint64_t from, std::uint64_t to,
                             const Visitor& fn) const;

    // Fill `basis` (k*n row-major) with the subspace at odometer `index` of `pat`.
    void materialize(const Pattern& pat, std::uint64_t index, PrimeField::Elem* basis) const;

  private:
    std::uint32_t p_;
    unsigned k_, n_;
    std::vector<Pattern> patterns_;
    BigInt total_;
};

// Uniform over Gr(k, n): i.i.d. uniform k x n matrices, rejected until rank k;
// every subspace has exactly |GL_k(F_p)| preimages.
Subspace<PrimeField> sample_subspace(const PrimeField& f, unsigned k, unsigned n, Rng& rng);

}  // namespace wedgelab
