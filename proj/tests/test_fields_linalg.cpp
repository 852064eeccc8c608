#include <doctest.h>

#include <functional>

#include "wedgelab/fields.hpp"
#include "wedgelab/intmatrix.hpp"
#include "wedgelab/matrix.hpp"
#include "wedgelab/rng.hpp"
#include "wedgelab/subspace.hpp"

using namespace wedgelab;

namespace {

Mat<PrimeField> random_matrix(const PrimeField& f, std::size_t rows, std::size_t cols, Rng& rng) {
    Mat<PrimeField> m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m.at(i, j) = static_cast<PrimeField::Elem>(rng.uniform_below(f.modulus()));
    return m;
}

}  // namespace

TEST_CASE("prime field validates the modulus") {
    CHECK_THROWS_AS(PrimeField(2), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(9), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(65537), std::invalid_argument);  // prime but >= 2^16
    CHECK(PrimeField(3).modulus() == 3);
    CHECK(PrimeField(65521).modulus() == 65521);
}

TEST_CASE("prime field arithmetic") {
    PrimeField f(7);
    CHECK(f.add(5, 4) == 2);
    CHECK(f.sub(2, 5) == 4);
    CHECK(f.mul(3, 5) == 1);
    CHECK(f.inv(3) == 5);
    CHECK(f.mul(f.half(), 2) == 1);
    CHECK(f.from_int(-1) == 6);
    CHECK_THROWS_AS(f.inv(0), std::domain_error);
    for (std::int64_t a = 1; a < 7; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
}

TEST_CASE("rref identity over F_5") {
    PrimeField f(5);
    auto rr = rref(Mat<PrimeField>::identity(f, 3));
    CHECK(rr.rank == 3);
    CHECK(rr.R == Mat<PrimeField>::identity(f, 3));
}

TEST_CASE("rref proportional rows over F_7") {
    PrimeField f(7);
    auto m = Mat<PrimeField>::from_rows(f, {{1, 2, 3}, {2, 4, 6}}, 3);
    CHECK(rref(m).rank == 1);
}

TEST_CASE("rref is idempotent on random full-rank matrices over F_3") {
    PrimeField f(3);
    Rng rng(42);
    unsigned found = 0;
    while (found < 20) {
        auto m = random_matrix(f, 4, 6, rng);
        auto rr = rref(m);
        if (rr.rank != 4) continue;
        ++found;
        auto again = rref(rr.R);
        CHECK(again.R == rr.R);
        CHECK(again.rank == 4);
    }
}

TEST_CASE("kernel of the zero and identity matrices") {
    PrimeField f(5);
    CHECK(kernel_basis(Mat<PrimeField>(f, 2, 3)).dim() == 3);
    CHECK(kernel_basis(Mat<PrimeField>::identity(f, 3)).dim() == 0);
}

TEST_CASE("kernel vectors are annihilated") {
    PrimeField f(3);
    auto m = Mat<PrimeField>::from_rows(f, {{1, 1, 1}}, 3);
    auto k = kernel_basis(m);
    CHECK(k.dim() == 2);
    for (std::size_t i = 0; i < k.dim(); ++i) {
        auto img = m.apply(k.basis().row(i));
        for (auto x : img) CHECK(x == 0);
    }

    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto mm = random_matrix(f, 3, 5, rng);
        auto kk = kernel_basis(mm);
        CHECK(kk.dim() == 5 - rref(mm).rank);
        for (std::size_t i = 0; i < kk.dim(); ++i) {
            auto img = mm.apply(kk.basis().row(i));
            for (auto x : img) CHECK(x == 0);
        }
    }
}

TEST_CASE("subspace sum and intersection on coordinate lines") {
    PrimeField f(5);
    auto e1 = Subspace<PrimeField>::from_vectors(f, {{1, 0, 0}}, 3);
    auto e2 = Subspace<PrimeField>::from_vectors(f, {{0, 1, 0}}, 3);
    CHECK(subspace_sum(e1, e2).dim() == 2);
    CHECK(subspace_intersect(e1, e2).dim() == 0);
    CHECK(subspace_sum(e1, e1) == e1);
    CHECK(subspace_intersect(e1, e1) == e1);
}

TEST_CASE("ambient mismatch is rejected") {
    PrimeField f(5);
    auto a = Subspace<PrimeField>::from_vectors(f, {{1, 0, 0}}, 3);
    auto b = Subspace<PrimeField>::from_vectors(f, {{1, 0}}, 2);
    CHECK_THROWS_AS(subspace_sum(a, b), std::invalid_argument);
}

TEST_CASE("Grassmann dimension formula on 1000 random pairs in F_3^6") {
    PrimeField f(3);
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        auto a = Subspace<PrimeField>::from_rows(random_matrix(f, 2, 6, rng));
        auto b = Subspace<PrimeField>::from_rows(random_matrix(f, 3, 6, rng));
        const auto s = subspace_sum(a, b).dim();
        const auto i = subspace_intersect(a, b).dim();
        CHECK(a.dim() + b.dim() == s + i);
        CHECK(subspace_sum(a, b).contains(a));
        CHECK(a.contains(subspace_intersect(a, b)));
    }
}

TEST_CASE("canonical form does not depend on the presented basis") {
    PrimeField f(7);
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto m = random_matrix(f, 3, 5, rng);
        auto a = Subspace<PrimeField>::from_rows(m);
        // Re-present by random row operations.
        Mat<PrimeField> mixed(f, 3, 5);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 5; ++j) {
                PrimeField::Elem acc = 0;
                for (int k = 0; k < 3; ++k) {
                    auto c = static_cast<PrimeField::Elem>(rng.uniform_below(7));
                    acc = f.add(acc, f.mul(c, m.at(k, j)));
                }
                mixed.at(i, j) = acc;
            }
        auto b = Subspace<PrimeField>::from_rows(mixed);
        if (b.dim() == a.dim()) {
            bool inside = true;
            for (std::size_t i = 0; i < b.dim(); ++i)
                inside = inside && a.contains(b.basis().row(i));
            if (inside) CHECK(a == b);
        }
    }
}

TEST_CASE("membership via reduce") {
    PrimeField f(3);
    auto s = Subspace<PrimeField>::from_vectors(f, {{1, 0, 2}, {0, 1, 1}}, 3);
    CHECK(s.contains({1, 1, 0}));
    CHECK_FALSE(s.contains({0, 0, 1}));
    CHECK(Subspace<PrimeField>::zero(f, 3).dim() == 0);
    CHECK_FALSE(Subspace<PrimeField>::zero(f, 3).contains({1, 0, 0}));
}

TEST_CASE("rational arithmetic is exact at 200 digits") {
    RationalField f;
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        std::string num, den;
        for (int i = 0; i < 200; ++i) {
            num.push_back(static_cast<char>('1' + rng.uniform_below(9)));
            den.push_back(static_cast<char>('1' + rng.uniform_below(9)));
        }
        BigRational a{BigInt(num), BigInt(den)};
        CHECK(f.mul(a, f.inv(a)) == 1);
    }
}

TEST_CASE("rational rref solves exactly") {
    RationalField f;
    auto m = Mat<RationalField>::from_rows(
        f, {{BigRational(1, 3), BigRational(2, 7)}, {BigRational(5, 11), BigRational(1, 2)}}, 2);
    CHECK(rref(m).rank == 2);
}

namespace {

// Independent oracle: elementary divisors via determinantal divisors, the gcd
// of all k x k minors.
std::vector<BigInt> snf_via_minor_gcds(const IntMatrix& m) {
    const std::size_t n = std::min(m.rows(), m.cols());
    std::vector<BigInt> det_div(n + 1, 0);
    det_div[0] = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        BigInt g = 0;
        std::vector<std::size_t> rows_pick(k), cols_pick(k);
        // Enumerate all k-subsets of rows and columns.
        std::function<void(std::size_t, std::size_t)> pick_rows = [&](std::size_t at,
                                                                      std::size_t start) {
            if (at == k) {
                std::function<void(std::size_t, std::size_t)> pick_cols =
                    [&](std::size_t cat, std::size_t cstart) {
                        if (cat == k) {
                            // Bareiss-free tiny determinant by Laplace expansion.
                            std::function<BigInt(std::vector<std::size_t>,
                                                 std::vector<std::size_t>)>
                                det = [&](std::vector<std::size_t> rr, std::vector<std::size_t> cc)
                                -> BigInt {
                                if (rr.size() == 1) return m.at(rr[0], cc[0]);
                                BigInt acc = 0;
                                for (std::size_t j = 0; j < cc.size(); ++j) {
                                    auto rr2 = std::vector<std::size_t>(rr.begin() + 1, rr.end());
                                    auto cc2 = cc;
                                    cc2.erase(cc2.begin() + j);
                                    BigInt term = m.at(rr[0], cc[j]) * det(rr2, cc2);
                                    acc += (j % 2 == 0) ? term : -term;
                                }
                                return acc;
                            };
                            g = boost::multiprecision::gcd(
                                g, boost::multiprecision::abs(det(rows_pick, cols_pick)));
                            return;
                        }
                        for (std::size_t c = cstart; c < m.cols(); ++c) {
                            cols_pick[cat] = c;
                            pick_cols(cat + 1, c + 1);
                        }
                    };
                pick_cols(0, 0);
                return;
            }
            for (std::size_t rr = start; rr < m.rows(); ++rr) {
                rows_pick[at] = rr;
                pick_rows(at + 1, rr + 1);
            }
        };
        pick_rows(0, 0);
        det_div[k] = g;
    }
    std::vector<BigInt> out(n, 0);
    for (std::size_t k = 1; k <= n; ++k) {
        if (det_div[k] == 0) break;
        out[k - 1] = det_div[k] / det_div[k - 1];
    }
    return out;
}

}  // namespace

TEST_CASE("smith normal form on the stated instances") {
    auto d1 = smith_normal_form(IntMatrix::from_rows({{1, 0}, {1, 5}}));
    CHECK(d1 == std::vector<BigInt>{1, 5});

    auto id4 = smith_normal_form(IntMatrix::from_rows(
        {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}));
    CHECK(id4 == std::vector<BigInt>{1, 1, 1, 1});

    auto d2 = smith_normal_form(IntMatrix::from_rows({{2, 4}, {6, 8}}));
    CHECK(d2 == std::vector<BigInt>{2, 4});
    CHECK(d2 == snf_via_minor_gcds(IntMatrix::from_rows({{2, 4}, {6, 8}})));
}

TEST_CASE("smith normal form matches the determinantal-divisor oracle") {
    Rng rng(31337);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t rows = 2 + rng.uniform_below(2);
        const std::size_t cols = 2 + rng.uniform_below(2);
        IntMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                m.at(i, j) = BigInt(static_cast<std::int64_t>(rng.uniform_below(21)) - 10);
        auto got = smith_normal_form(m);
        auto want = snf_via_minor_gcds(m);
        CHECK(got == want);
        for (std::size_t k = 1; k < got.size(); ++k)
            if (got[k - 1] != 0 && got[k] != 0) CHECK(got[k] % got[k - 1] == 0);
    }
}
