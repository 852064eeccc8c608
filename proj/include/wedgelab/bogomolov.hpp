#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "wedgelab/errors.hpp"
#include "wedgelab/fields.hpp"
#include "wedgelab/grassmannian.hpp"
#include "wedgelab/subspace.hpp"
#include "wedgelab/wedge.hpp"

namespace wedgelab {

// Inverse of m = C(d,2); throws if m is not a triangular number.
unsigned ambient_to_d(std::size_t m);

// The projective decomposable lines of Lambda^2 F_p^d (the F_p-points of
// Gr(2,V) in Pluecker coordinates), each normalized to leading coefficient 1.
// Stored in a fixed pseudorandomly shuffled order so that membership scans
// hit independent members early.
class DecomposableLines {
  public:
    DecomposableLines(std::uint32_t p, unsigned d, std::uint64_t line_budget);

    std::size_t count() const { return count_; }
    std::size_t coords() const { return coords_; }
    const std::uint16_t* line(std::size_t i) const { return data_.data() + i * coords_; }

  private:
    std::size_t count_ = 0;
    std::size_t coords_;
    std::vector<std::uint16_t> data_;
};

struct ClosureOptions {
    // Exhaustive scan of the (p^r - 1)/(p - 1) projective points of L is used
    // when that count stays within point_budget; scanning the decomposable
    // lines of the ambient space is the alternative exact route when their
    // count stays within ambient_line_budget. The random-slice search is the
    // last resort and can only certify a full span; anything else is a hard
    // BudgetExceeded, never a wrong answer.
    std::uint64_t point_budget = 10'000'000;
    std::uint64_t ambient_line_budget = 4'000'000;
    unsigned slice_dim = 3;
    unsigned restarts = 64;
    std::uint64_t seed = 1;
};

// Reusable worker for closure computations over a fixed (p, d); holds the
// pair-basis index and, once needed, the decomposable-line cache.
class ClosureEngine {
  public:
    ClosureEngine(PrimeField f, unsigned d, ClosureOptions options = {});

    const PrimeField& field() const { return f_; }
    const WedgeBasisIndex& wedge_basis() const { return wb_; }
    unsigned d() const { return d_; }

    // dim <(DW cap L)> for L given by an RREF basis view (r rows x C(d,2)
    // cols, row-major). Stops early once the span reaches r.
    std::size_t closure_dim(const PrimeField::Elem* basis, std::size_t r);

    Subspace<PrimeField> closure_subspace(const Subspace<PrimeField>& L);

    const DecomposableLines& lines();  // builds the cache on first use

  private:
    enum class Strategy { ScanPoints, ScanAmbient, RandomSlice };
    Strategy choose_strategy(std::size_t r) const;

    template <class Sink>
    void scan_points(const PrimeField::Elem* basis, std::size_t r, Sink&& sink);
    template <class Sink>
    void scan_ambient(const PrimeField::Elem* basis, std::size_t r, Sink&& sink);

    PrimeField f_;
    unsigned d_;
    WedgeBasisIndex wb_;
    ClosureOptions options_;
    std::unique_ptr<DecomposableLines> lines_;
    std::vector<PrimeField::Elem> scratch_w_, scratch_sq_, scratch_coeff_;
};

// Span of all decomposable vectors lying in L; always a subspace of L, and
// idempotent. L must live in Lambda^2 F_p^d with d recovered from the ambient
// dimension.
Subspace<PrimeField> decomposable_closure(const Subspace<PrimeField>& L,
                                          const ClosureOptions& options = {});

// (p, d, r, L) with L <= Lambda^2 F_p^d of dimension r, defining the group
// G_L of order p^(d + C(d,2) - r) and exponent p. Coset representatives for
// W/L use the non-pivot coordinates of L's RREF, fixed once here.
class GroupParameters {
  public:
    GroupParameters(PrimeField f, unsigned d, Subspace<PrimeField> L);

    const PrimeField& field() const { return f_; }
    unsigned d() const { return d_; }
    unsigned r() const { return static_cast<unsigned>(L_.dim()); }
    unsigned rho() const { return static_cast<unsigned>(section_cols_.size()); }
    const Subspace<PrimeField>& L() const { return L_; }
    const WedgeBasisIndex& wedge_basis() const { return wb_; }
    const std::vector<std::size_t>& section_cols() const { return section_cols_; }
    BigInt group_order() const;

    // Reduce a full Lambda^2 vector modulo L and read off the section coordinates.
    std::vector<PrimeField::Elem> project_to_section(std::vector<PrimeField::Elem> w_full) const;

  private:
    PrimeField f_;
    unsigned d_;
    Subspace<PrimeField> L_;
    WedgeBasisIndex wb_;
    std::vector<std::size_t> section_cols_;
};

struct B0Result {
    Subspace<PrimeField> closure;  // L^ = <DW cap L>
    std::size_t b0_dim;            // dim L - dim L^
    BigInt b0_order;               // p^b0_dim
};

B0Result bogomolov(const GroupParameters& params, const ClosureOptions& options = {});

// Element (v, w) of G_L = V + W/L; w holds section coordinates.
struct ClassTwoElement {
    std::vector<PrimeField::Elem> v;
    std::vector<PrimeField::Elem> w;

    bool operator==(const ClassTwoElement& o) const { return v == o.v && w == o.w; }
};

ClassTwoElement group_identity(const GroupParameters& params);
ClassTwoElement group_multiply(const GroupParameters& params, const ClassTwoElement& g,
                               const ClassTwoElement& h);
ClassTwoElement group_commutator(const GroupParameters& params, const ClassTwoElement& g,
                                 const ClassTwoElement& h);
ClassTwoElement group_power(const GroupParameters& params, const ClassTwoElement& g,
                            std::int64_t k);

// True iff every coset of W/L contains a decomposable vector, i.e. every
// element of [G_L, G_L] is a single commutator.
bool commutator_coset_surjectivity(const GroupParameters& params,
                                   std::uint64_t coset_budget = 10'000'000);

// Builds the algebra V + W/L, its bracket on Lambda^2, the Jacobi image of
// Lambda^3, and verifies im theta <= <D cap ker kappa>. Tiny instances only.
bool jacobi_absorption_check(const GroupParameters& params,
                             std::uint64_t point_budget = 10'000'000);

struct TorsionWitnessD4 {
    std::array<BigInt, 3> quadric;  // (q_aa, q_ab, q_bb): q_aa a^2 + q_ab ab + q_bb b^2
    std::vector<std::pair<BigInt, BigInt>> directions;  // primitive integer solutions
    std::vector<BigInt> snf_divisors;
    BigInt sk1_order_over_Zp;
    bool sk1_trivial_over_Qp;
};

// The d = 4 integer witness: L = <e1^e2, e3^e2 + e1^e4 + p e3^e4> over exact
// integers. The decomposable directions inside L are read off the exact
// factorization of the wedge-square quadric, their lattice index inside L
// comes from the Smith normal form, and the rational span of the two
// decomposables recovers all of L tensor Q.
TorsionWitnessD4 torsion_witness_d4(std::uint32_t p);

}  // namespace wedgelab
