#pragma once

#include <cstddef>
#include <vector>

#include "wedgelab/fields.hpp"

namespace wedgelab {

// Small integer matrix with arbitrary-precision entries; exact arithmetic only.
class IntMatrix {
  public:
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static IntMatrix from_rows(const std::vector<std::vector<BigInt>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    BigInt& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const BigInt& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  private:
    std::size_t rows_, cols_;
    std::vector<BigInt> a_;
};

// Elementary divisors d1 | d2 | ... of M, nonnegative, one per min(rows, cols)
// diagonal slot (zeros trail when the rank is deficient).
std::vector<BigInt> smith_normal_form(IntMatrix m);

}  // namespace wedgelab
