#include <doctest.h>

#include <set>
#include <string>

#include "wedgelab/grassmannian.hpp"
#include "wedgelab/rng.hpp"

using namespace wedgelab;

namespace {

std::string basis_key(std::uint32_t, unsigned k, unsigned n, const PrimeField::Elem* basis) {
    std::string key;
    key.reserve(static_cast<std::size_t>(k) * n);
    for (unsigned i = 0; i < k * n; ++i) key.push_back(static_cast<char>(basis[i]));
    return key;
}

}  // namespace

TEST_CASE("gaussian binomial: stated values") {
    CHECK(gaussian_binomial(6, 3, 3).value == 33880);
    CHECK(gaussian_binomial(4, 2, 3).value == 130);
    for (unsigned n = 0; n <= 8; ++n) {
        CHECK(gaussian_binomial(n, 0, 5).value == 1);
        CHECK(gaussian_binomial(n, n, 5).value == 1);
    }
    CHECK_THROWS_AS(gaussian_binomial(3, 4, 3), std::invalid_argument);
}

TEST_CASE("gaussian binomial bounds and symmetry over the stated grid") {
    for (std::uint32_t p : {3u, 5u, 7u, 11u}) {
        for (unsigned n = 1; n <= 12; ++n)
            for (unsigned k = 1; k < n; ++k) {
                auto g = gaussian_binomial(n, k, p);
                CHECK(g.lower_bound <= g.value);
                CHECK(g.value <= g.upper_bound);
                CHECK(g.value == gaussian_binomial(n, n - k, p).value);
            }
    }
}

TEST_CASE("gaussian binomial leading term: value / p^(k(n-k)) in [1, 1 + 4/p]") {
    for (std::uint32_t p = 3; p <= 101; ++p) {
        if (!is_prime(p)) continue;
        for (unsigned n = 2; n <= 8; ++n)
            for (unsigned k = 1; k < n; ++k) {
                const auto g = gaussian_binomial(n, k, p);
                const BigInt lead = boost::multiprecision::pow(BigInt(p), k * (n - k));
                CHECK(g.value >= lead);
                // value * p <= lead * (p + 4)
                CHECK(g.value * p <= lead * (p + 4));
            }
    }
}

TEST_CASE("enumeration yields each subspace exactly once, in RREF") {
    SubspaceStream stream(3, 2, 4);
    std::set<std::string> keys;
    std::uint64_t visited = 0;
    stream.for_each([&](const PrimeField::Elem* basis) {
        ++visited;
        keys.insert(basis_key(3, 2, 4, basis));
        // RREF contract: each row has a leading 1 with zeros elsewhere in the
        // pivot column, pivots strictly increasing.
        int prev_pivot = -1;
        for (int i = 0; i < 2; ++i) {
            int pivot = -1;
            for (int j = 0; j < 4; ++j)
                if (basis[i * 4 + j] != 0) {
                    pivot = j;
                    break;
                }
            REQUIRE(pivot > prev_pivot);
            CHECK(basis[i * 4 + pivot] == 1);
            for (int other = 0; other < 2; ++other)
                if (other != i) CHECK(basis[other * 4 + pivot] == 0);
            prev_pivot = pivot;
        }
    });
    CHECK(visited == 130);
    CHECK(keys.size() == 130);
}

TEST_CASE("enumeration counts match the gaussian binomial") {
    CHECK(SubspaceStream(3, 1, 3).total() == 13);
    std::uint64_t count = 0;
    SubspaceStream(3, 1, 3).for_each([&](const PrimeField::Elem*) { ++count; });
    CHECK(count == 13);

    for (std::uint32_t p : {3u, 5u}) {
        for (unsigned n = 1; n <= 6; ++n)
            for (unsigned k = 0; k <= n; ++k) {
                std::uint64_t c = 0;
                SubspaceStream(p, k, n).for_each([&](const PrimeField::Elem*) { ++c; });
                CHECK(BigInt(c) == gaussian_binomial(n, k, p).value);
            }
    }
}

TEST_CASE("enumeration of Gr(3, F_3^6) hits the full count") {
    std::uint64_t count = 0;
    SubspaceStream(3, 3, 6).for_each([&](const PrimeField::Elem*) { ++count; });
    CHECK(count == 33880);
}

TEST_CASE("chunked pattern ranges cover the stream exactly") {
    SubspaceStream stream(3, 2, 4);
    std::set<std::string> whole;
    stream.for_each(
        [&](const PrimeField::Elem* b) { whole.insert(basis_key(3, 2, 4, b)); });

    std::set<std::string> chunked;
    for (const auto& pat : stream.patterns()) {
        const std::uint64_t half = pat.count / 2;
        stream.for_each_in_pattern(
            pat, 0, half, [&](const PrimeField::Elem* b) { chunked.insert(basis_key(3, 2, 4, b)); });
        stream.for_each_in_pattern(pat, half, pat.count, [&](const PrimeField::Elem* b) {
            chunked.insert(basis_key(3, 2, 4, b));
        });
    }
    CHECK(whole == chunked);
}

TEST_CASE("enumeration budget guard") {
    CHECK_THROWS_AS(SubspaceStream(5, 3, 12, 1000), BudgetExceeded);
}

TEST_CASE("sampling the full space always returns it") {
    PrimeField f(7);
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        auto s = sample_subspace(f, 3, 3, rng);
        CHECK(s.dim() == 3);
        CHECK(s == Subspace<PrimeField>::full(f, 3));
    }
}

TEST_CASE("sampler is uniform on Gr(1, F_3^3): chi-square over the 13 lines") {
    PrimeField f(3);
    Rng rng(20240809);
    std::map<std::string, unsigned> counts;
    const unsigned draws = 10000;
    for (unsigned t = 0; t < draws; ++t) {
        auto s = sample_subspace(f, 1, 3, rng);
        std::string key;
        for (int j = 0; j < 3; ++j) key.push_back(static_cast<char>(s.basis().at(0, j)));
        ++counts[key];
    }
    CHECK(counts.size() == 13);
    const double expected = draws / 13.0;
    double stat = 0;
    for (const auto& [key, c] : counts) {
        const double diff = c - expected;
        stat += diff * diff / expected;
    }
    // 0.999 quantile of chi-square with 12 degrees of freedom.
    CHECK(stat < 32.909);
}

TEST_CASE("sampled subspaces honor the dimension and canonical-form contract") {
    PrimeField f(5);
    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
        auto s = sample_subspace(f, 2, 6, rng);
        CHECK(s.dim() == 2);
        CHECK(s.ambient_dim() == 6);
        auto again = Subspace<PrimeField>::from_rows(s.basis());
        CHECK(again == s);
    }
}
