#include "wedgelab/intmatrix.hpp"

#include <stdexcept>

namespace wedgelab {

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<BigInt>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows[0].size();
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw std::invalid_argument("IntMatrix: ragged rows");
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
}

}  // namespace

std::vector<BigInt> smith_normal_form(IntMatrix m) {
    using boost::multiprecision::abs;
    const std::size_t n = std::min(m.rows(), m.cols());
    std::vector<BigInt> divisors(n, 0);

    for (std::size_t t = 0; t < n; ++t) {
        // Pick the nonzero entry of minimal absolute value in the trailing block.
        bool found = false;
        std::size_t pr = t, pc = t;
        BigInt best = 0;
        for (std::size_t i = t; i < m.rows(); ++i)
            for (std::size_t j = t; j < m.cols(); ++j) {
                if (m.at(i, j) == 0) continue;
                if (!found || abs(m.at(i, j)) < best) {
                    best = abs(m.at(i, j));
                    pr = i;
                    pc = j;
                    found = true;
                }
            }
        if (!found) break;  // trailing block is zero; remaining divisors stay 0
        if (pr != t) swap_rows(m, t, pr);
        if (pc != t) swap_cols(m, t, pc);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m.rows(); ++i) {
                if (m.at(i, t) == 0) continue;
                BigInt q = m.at(i, t) / m.at(t, t);
                for (std::size_t j = t; j < m.cols(); ++j) m.at(i, j) -= q * m.at(t, j);
                if (m.at(i, t) != 0) {
                    // Remainder is smaller than the pivot; promote it.
                    swap_rows(m, t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < m.cols(); ++j) {
                if (m.at(t, j) == 0) continue;
                BigInt q = m.at(t, j) / m.at(t, t);
                for (std::size_t i = t; i < m.rows(); ++i) m.at(i, j) -= q * m.at(i, t);
                if (m.at(t, j) != 0) {
                    swap_cols(m, t, j);
                    clean = false;
                }
            }
            if (!clean) continue;

            // Row and column are clear; force divisibility of the interior.
            bool divides_all = true;
            for (std::size_t i = t + 1; i < m.rows() && divides_all; ++i)
                for (std::size_t j = t + 1; j < m.cols() && divides_all; ++j)
                    if (m.at(i, j) % m.at(t, t) != 0) {
                        for (std::size_t jj = t; jj < m.cols(); ++jj)
                            m.at(t, jj) += m.at(i, jj);
                        divides_all = false;
                    }
            if (divides_all) break;
        }
        divisors[t] = abs(m.at(t, t));
    }
    return divisors;
}

}  // namespace wedgelab
