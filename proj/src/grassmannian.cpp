#include "wedgelab/grassmannian.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace wedgelab {

GaussianBinomial gaussian_binomial(unsigned n, unsigned k, std::uint32_t p) {
    if (k > n) throw std::invalid_argument("gaussian_binomial: k > n");
    const BigInt bp(p);
    BigInt num = 1, den = 1;
    for (unsigned i = 0; i < k; ++i) {
        num *= boost::multiprecision::pow(bp, n) - boost::multiprecision::pow(bp, i);
        den *= boost::multiprecision::pow(bp, k) - boost::multiprecision::pow(bp, i);
    }
    GaussianBinomial g;
    g.value = num / den;
    if (g.value * den != num) throw std::logic_error("gaussian_binomial: inexact division");
    const long long e = static_cast<long long>(k) * (n - k);
    g.lower_bound = e >= static_cast<long long>(k)
                        ? boost::multiprecision::pow(bp, static_cast<unsigned>(e - k))
                        : BigInt(0);
    g.upper_bound = boost::multiprecision::pow(bp, static_cast<unsigned>(e + k));
    return g;
}

namespace {

// All k-subsets of {0..n-1} in colexicographic order: sorted by reversed tuple.
std::vector<std::vector<unsigned>> colex_subsets(unsigned n, unsigned k) {
    std::vector<std::vector<unsigned>> out;
    if (k == 0) {
        out.push_back({});
        return out;
    }
    std::vector<unsigned> cur(k);
    // Recursive descent from the largest element downward yields colex order.
    std::function<void(unsigned, unsigned)> rec = [&](unsigned slot, unsigned max_val) {
        // slot counts down from k; choose cur[slot-1] from {slot-1 .. max_val}
        if (slot == 0) {
            out.push_back(cur);
            return;
        }
        for (unsigned v = slot - 1; v <= max_val; ++v) {
            cur[slot - 1] = v;
            rec(slot - 1, v == 0 ? 0 : v - 1);
        }
    };
    rec(k, n - 1);
    return out;
}

}  // namespace

SubspaceStream::SubspaceStream(std::uint32_t p, unsigned k, unsigned n, std::uint64_t budget)
    : p_(p), k_(k), n_(n) {
    if (k > n) throw std::invalid_argument("SubspaceStream: k > n");
    auto g = gaussian_binomial(n, k, p);
    total_ = g.value;
    if (total_ > BigInt(budget))
        throw BudgetExceeded("SubspaceStream: |Gr(" + std::to_string(k) + "," + std::to_string(n) +
                             ")| over F_" + std::to_string(p) + " is " + total_.str() +
                             " > budget " + std::to_string(budget));

    for (auto& cols : colex_subsets(n, k)) {
        Pattern pat;
        pat.pivot_cols = cols;
        std::vector<bool> is_pivot(n, false);
        for (auto c : cols) is_pivot[c] = true;
        for (unsigned i = 0; i < k; ++i)
            for (unsigned j = cols[i] + 1; j < n; ++j)
                if (!is_pivot[j]) pat.free_cells.emplace_back(i, j);
        pat.count = 1;
        for (std::size_t t = 0; t < pat.free_cells.size(); ++t) pat.count *= p;
        patterns_.push_back(std::move(pat));
    }
}

void SubspaceStream::materialize(const Pattern& pat, std::uint64_t index,
                                 PrimeField::Elem* basis) const {
    std::fill(basis, basis + static_cast<std::size_t>(k_) * n_, 0);
    for (unsigned i = 0; i < k_; ++i) basis[i * n_ + pat.pivot_cols[i]] = 1;
    // Odometer digits base p, last free cell fastest.
    for (std::size_t t = pat.free_cells.size(); t-- > 0;) {
        const auto [r, c] = pat.free_cells[t];
        basis[r * n_ + c] = static_cast<PrimeField::Elem>(index % p_);
        index /= p_;
    }
}

void SubspaceStream::for_each_in_pattern(const Pattern& pat, std::uint64_t from, std::uint64_t to,
                                         const Visitor& fn) const {
    std::vector<PrimeField::Elem> basis(static_cast<std::size_t>(k_) * n_);
    if (from >= to) return;
    materialize(pat, from, basis.data());
    const std::size_t nfree = pat.free_cells.size();
    for (std::uint64_t idx = from;; ) {
        fn(basis.data());
        if (++idx == to) break;
        // Increment the odometer in place.
        std::size_t t = nfree;
        while (t-- > 0) {
            const auto [r, c] = pat.free_cells[t];
            auto& cell = basis[r * n_ + c];
            if (++cell < static_cast<PrimeField::Elem>(p_)) break;
            cell = 0;
        }
    }
}

void SubspaceStream::for_each(const Visitor& fn) const {
    for (const auto& pat : patterns_) for_each_in_pattern(pat, 0, pat.count, fn);
}

Subspace<PrimeField> sample_subspace(const PrimeField& f, unsigned k, unsigned n, Rng& rng) {
    if (k > n) throw std::invalid_argument("sample_subspace: k > n");
    const std::uint32_t p = f.modulus();
    for (;;) {
        Mat<PrimeField> m(f, k, n);
        for (unsigned i = 0; i < k; ++i)
            for (unsigned j = 0; j < n; ++j)
                m.at(i, j) = static_cast<PrimeField::Elem>(rng.uniform_below(p));
        auto rr = rref(std::move(m));
        if (rr.rank == k) {
            Mat<PrimeField> basis(f, k, n);
            for (unsigned i = 0; i < k; ++i)
                for (unsigned j = 0; j < n; ++j) basis.at(i, j) = rr.R.at(i, j);
            return Subspace<PrimeField>::from_rows(std::move(basis));
        }
    }
}

}  // namespace wedgelab
