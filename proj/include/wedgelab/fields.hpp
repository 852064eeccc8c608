#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wedgelab {

using BigInt = boost::multiprecision::mpz_int;
using BigRational = boost::multiprecision::mpq_rational;

bool is_prime(std::uint32_t n);

// Smallest generator of F_p^*, found by trial.
std::uint32_t smallest_primitive_root(std::uint32_t p);

// Arithmetic in F_p for an odd prime p < 2^16. Elements are kept canonical
// in [0, p); products fit in a signed 64-bit word with one reduction.
class PrimeField {
  public:
    using Elem = std::int64_t;

    explicit PrimeField(std::uint32_t p) : p_(p) {
        if (p < 3 || p >= (1u << 16) || !is_prime(p))
            throw std::invalid_argument("PrimeField: modulus must be an odd prime < 2^16, got " +
                                        std::to_string(p));
    }

    std::uint32_t modulus() const { return p_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }

    Elem from_int(std::int64_t v) const {
        Elem r = v % static_cast<Elem>(p_);
        return r < 0 ? r + p_ : r;
    }

    Elem add(Elem a, Elem b) const {
        Elem s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Elem sub(Elem a, Elem b) const {
        Elem s = a - b;
        return s < 0 ? s + p_ : s;
    }
    Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
    Elem mul(Elem a, Elem b) const { return (a * b) % p_; }

    Elem inv(Elem a) const;  // throws std::domain_error on 0

    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    // Inverse of 2, the scalar of the class-2 BCH formula.
    Elem half() const { return (static_cast<Elem>(p_) + 1) / 2; }

    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }
    bool operator!=(const PrimeField& o) const { return p_ != o.p_; }

    static std::string describe(Elem a) { return std::to_string(a); }

  private:
    std::uint32_t p_;
};

// Exact rational arithmetic (GMP-backed, arbitrary precision). Stands in
// wherever a statement only involves field-of-fractions linear algebra.
class RationalField {
  public:
    using Elem = BigRational;

    RationalField() = default;

    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    Elem from_int(std::int64_t v) const { return Elem(v); }

    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw std::domain_error("RationalField: division by zero");
        return 1 / a;
    }
    Elem div(const Elem& a, const Elem& b) const { return a / b; }
    Elem half() const { return Elem(1, 2); }

    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }

    bool operator==(const RationalField&) const { return true; }
    bool operator!=(const RationalField&) const { return false; }

    static std::string describe(const Elem& a) { return a.str(); }
};

}  // namespace wedgelab
