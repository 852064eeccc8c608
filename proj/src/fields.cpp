#include "wedgelab/fields.hpp"

namespace wedgelab {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint32_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::uint32_t smallest_primitive_root(std::uint32_t p) {
    // Trial over candidates: g generates F_p^* iff g^((p-1)/q) != 1 for every
    // prime q | p-1.
    std::vector<std::uint32_t> prime_factors;
    std::uint32_t m = p - 1;
    for (std::uint32_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            prime_factors.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) prime_factors.push_back(m);

    auto pow_mod = [p](std::uint64_t base, std::uint32_t e) {
        std::uint64_t r = 1;
        base %= p;
        while (e) {
            if (e & 1) r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return r;
    };

    for (std::uint32_t g = 2; g < p; ++g) {
        bool generates = true;
        for (auto q : prime_factors) {
            if (pow_mod(g, (p - 1) / q) == 1) {
                generates = false;
                break;
            }
        }
        if (generates) return g;
    }
    throw std::logic_error("smallest_primitive_root: no generator found");
}

PrimeField::Elem PrimeField::inv(Elem a) const {
    if (a == 0) throw std::domain_error("PrimeField: division by zero");
    // Extended Euclid on (a, p).
    Elem t = 0, new_t = 1;
    Elem r = static_cast<Elem>(p_), new_r = a;
    while (new_r != 0) {
        Elem q = r / new_r;
        t -= q * new_t;
        std::swap(t, new_t);
        r -= q * new_r;
        std::swap(r, new_r);
    }
    return t < 0 ? t + p_ : t;
}

}  // namespace wedgelab
