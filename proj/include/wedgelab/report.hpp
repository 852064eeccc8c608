#pragma once

#include <json.hpp>
#include <ostream>
#include <string>

#include "wedgelab/fields.hpp"
#include "wedgelab/subspace.hpp"

namespace wedgelab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// Exact reduced fraction; reports never round.
struct Fraction {
    BigInt num{0};
    BigInt den{1};

    static Fraction of(BigInt n, BigInt d);
    std::string str() const { return num.str() + "/" + den.str(); }
    double approx() const;
    bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }
};

Json fraction_json(const Fraction& f);

// {p, ambient, dim, rref_rows: [[ints mod p]]}
Json subspace_json(const Subspace<PrimeField>& s);
// Same shape with entries as exact "num/den" strings.
Json subspace_json(const Subspace<RationalField>& s);

Subspace<PrimeField> subspace_from_json(const Json& j);

// Envelope shared by every CLI report: {command, params, results, bounds,
// seed, runtime_ms, version}. runtime_ms can be suppressed so that identical
// seed + parameters give byte-identical output.
Json make_report(const std::string& command, Json params, Json results, Json bounds,
                 std::uint64_t seed, std::int64_t runtime_ms, bool include_runtime);

void write_json(const Json& report, std::ostream& os);
// Two-column key,value flattening; nested keys joined with '.'.
void write_csv(const Json& report, std::ostream& os);

}  // namespace wedgelab
