#include "wedgelab/morphism.hpp"

namespace wedgelab {

bool in_image_of_psi(const Subspace<PrimeField>& L, const ClosureOptions& options) {
    return decomposable_closure(L, options) == L;
}

std::vector<std::size_t> standard_complement_indices(unsigned d, unsigned N) {
    const WedgeBasisIndex wb(d);
    std::vector<std::size_t> out;
    for (std::size_t idx = 0; idx < wb.pair_count(); ++idx) {
        const auto [a, b] = wb.pair_at(idx);
        const bool same_block = a / 4 == b / 4 && a / 4 < N;
        if (!same_block) out.push_back(idx);
    }
    return out;
}

std::optional<BigInt> lemma_count_bound(std::uint32_t p, unsigned d, unsigned r, unsigned N) {
    const unsigned m = d * (d - 1) / 2;
    if (r > m) return std::nullopt;
    const unsigned rho = m - r;
    if (!(d > 4 * N && r > 3 * N && rho > 3 * N + 1)) return std::nullopt;
    const unsigned exponent = (r - 3 * N) * (rho - 3 * N - 1);
    return boost::multiprecision::pow(BigInt(p), exponent);
}

}  // namespace wedgelab
