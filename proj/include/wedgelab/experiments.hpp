#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wedgelab/bogomolov.hpp"
#include "wedgelab/grassmannian.hpp"
#include "wedgelab/morphism.hpp"
#include "wedgelab/report.hpp"

namespace wedgelab {

enum class CensusMode { Exhaustive, Sampled };

struct CensusOptions {
    CensusMode mode = CensusMode::Exhaustive;
    std::uint64_t trials = 10000;  // sampled mode
    std::uint64_t seed = 1;
    std::uint64_t budget = kDefaultEnumerationBudget;
    unsigned threads = 0;  // 0 = hardware concurrency
    ClosureOptions closure;
};

struct CensusReport {
    std::uint32_t p = 0;
    unsigned d = 0, r = 0;
    CensusMode mode = CensusMode::Exhaustive;
    std::uint64_t trials = 0;
    BigInt total;  // subspaces visited (|Gr(r, W)| exhaustive, trials sampled)
    std::uint64_t in_image = 0;
    std::map<std::size_t, std::uint64_t> b0_histogram;
    Fraction fraction_in_image;
    std::uint64_t seed = 0;
    std::int64_t runtime_ms = 0;
};

// Visits every L in Gr(r, Lambda^2 F_p^d) once (exhaustive) or draws uniform
// subspaces (sampled), recording the B0-dimension histogram. Exhaustive runs
// switch to enumerating annihilators when the codimension side is smaller and
// the decomposable lines of W fit in budget.
CensusReport census(std::uint32_t p, unsigned d, unsigned r, const CensusOptions& opts = {});

struct VerifyItem {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyD4Report {
    std::uint32_t p = 0;
    Fraction r1_fraction, r1_expected;
    BigInt x_count, x_count_expected;
    unsigned fibre_samples = 0;
    bool fibres_all_two = false;
    bool a_in_image = true, b_in_image = true;
    bool orbit_part_ran = false;  // exhaustive complement/orbit comparison (p <= 5)
    BigInt r3_total;
    std::uint64_t r3_complement = 0, orbit_a = 0, orbit_b = 0;
    bool complement_matches_orbits = false;
    std::array<Fraction, 3> r456_fraction;  // r = 4, 5, 6
    std::vector<VerifyItem> items;
    bool all_pass = false;
    std::uint64_t seed = 0;
    std::int64_t runtime_ms = 0;
};

VerifyD4Report verify_d4(std::uint32_t p, const CensusOptions& opts = {});

struct BoundComparison {
    std::string name;
    Fraction value;
    bool is_liminf_proxy = false;  // the large-r Catalan bound is a p->infinity
                                   // statement, compared as a desk-scale proxy
};

struct SampleReport {
    CensusReport base;
    double fraction_estimate = 0;
    double ci_low = 0, ci_high = 0;  // 95% binomial interval (normal approximation)
    std::vector<BoundComparison> bounds;
};

SampleReport sample_experiment(std::uint32_t p, unsigned d, unsigned r, std::uint64_t trials,
                               std::uint64_t seed, const CensusOptions& opts = {});

struct LogGenericReport {
    std::uint32_t p = 0;
    unsigned n = 0;
    Fraction alpha;
    unsigned d = 0, r = 0, rho = 0;
    BigInt group_count_exponent;  // C(d,2) * rho
    std::uint64_t trials = 0, b0_positive = 0;
    // Constructive family (N = 1 blocks + random subspace of the complement U).
    bool family_feasible = false;
    std::uint64_t family_members = 0, family_b0_ok = 0, family_distinct = 0;
    std::optional<BigInt> lemma_bound;  // engaged only under the strict hypotheses
    std::uint64_t seed = 0;
    std::int64_t runtime_ms = 0;
};

LogGenericReport loggeneric(std::uint32_t p, unsigned n, const Fraction& alpha,
                            std::uint64_t trials, std::uint64_t family_members,
                            std::uint64_t seed);

struct TorsionReport {
    std::uint32_t p = 0;
    TorsionWitnessD4 witness;
    std::int64_t runtime_ms = 0;
};

TorsionReport torsion_example(std::uint32_t p);

struct SubmersionTrialStats {
    std::uint64_t trials = 0, submersions = 0, immersions = 0;
    std::uint64_t criterion_disagreements = 0;  // rank flag vs subspace-sum condition
};

struct SubmersionReport {
    unsigned d = 0, r = 0;
    bool rational = true;
    std::uint32_t p = 0;
    std::size_t canonical_rank = 0, domain_dim = 0, codomain_dim = 0;
    bool canonical_submersion = false, canonical_immersion = false;
    bool canonical_condition_all = false;
    bool canonical_ok = false;  // rank reaches min(domain, codomain)
    SubmersionTrialStats random;
    std::uint64_t seed = 0;
    std::int64_t runtime_ms = 0;
};

// Evaluates the differential at the canonical tuple (lambdas 1, 2, 3, ...) and
// at seeded random tuples. r = 0 means the full C(d-2,2) + 1 planes; smaller r
// truncates the canonical tuple.
SubmersionReport submersion_check(unsigned d, bool rational, std::uint32_t p, unsigned r,
                                  std::uint64_t random_trials, std::uint64_t seed);

// Size of the GL(V)-orbit of L under the standard generating set (cycle,
// transvection, primitive-root diagonal) acting on Lambda^2 V.
std::uint64_t gl_orbit_size(const Subspace<PrimeField>& L, unsigned d);

// The two d = 4 exceptional subspaces (omega = smallest primitive root mod p).
Subspace<PrimeField> exceptional_subspace_a(const PrimeField& f);
Subspace<PrimeField> exceptional_subspace_b(const PrimeField& f);

// Sample a uniform (r - 3N)-dimensional subspace of the standard complement U,
// embedded back into Lambda^2 V coordinates.
Subspace<PrimeField> sample_complement_subspace(const PrimeField& f, unsigned d, unsigned N,
                                                unsigned dim, Rng& rng);

Json census_json(const CensusReport& r, bool include_runtime);
Json verify_d4_json(const VerifyD4Report& r, bool include_runtime);
Json sample_json(const SampleReport& r, bool include_runtime);
Json loggeneric_json(const LogGenericReport& r, bool include_runtime);
Json torsion_json(const TorsionReport& r, bool include_runtime);
Json submersion_json(const SubmersionReport& r, bool include_runtime);

}  // namespace wedgelab
