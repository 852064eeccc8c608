#include "wedgelab/report.hpp"

#include <boost/multiprecision/gmp.hpp>

namespace wedgelab {

Fraction Fraction::of(BigInt n, BigInt d) {
    if (d == 0) throw std::invalid_argument("Fraction: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(n), d);
    if (g == 0) g = 1;
    return Fraction{n / g, d / g};
}

double Fraction::approx() const {
    return static_cast<double>(BigRational(num) / BigRational(den));
}

namespace {

// Counts that fit a JSON-safe integer stay numeric; anything larger becomes a
// decimal string so reports remain exact.
Json big_json(const BigInt& v) {
    static const BigInt kMax = (BigInt(1) << 53);
    if (v >= 0 && v < kMax) return Json(static_cast<std::uint64_t>(v));
    if (v < 0 && -v < kMax) return Json(static_cast<std::int64_t>(v));
    return Json(v.str());
}

}  // namespace

Json fraction_json(const Fraction& f) {
    Json j;
    j["num"] = big_json(f.num);
    j["den"] = big_json(f.den);
    return j;
}

Json subspace_json(const Subspace<PrimeField>& s) {
    Json j;
    j["p"] = s.field().modulus();
    j["ambient"] = s.ambient_dim();
    j["dim"] = s.dim();
    Json rows = Json::array();
    for (std::size_t i = 0; i < s.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t c = 0; c < s.ambient_dim(); ++c)
            row.push_back(static_cast<std::int64_t>(s.basis().at(i, c)));
        rows.push_back(std::move(row));
    }
    j["rref_rows"] = std::move(rows);
    return j;
}

Json subspace_json(const Subspace<RationalField>& s) {
    Json j;
    j["field"] = "rational";
    j["ambient"] = s.ambient_dim();
    j["dim"] = s.dim();
    Json rows = Json::array();
    for (std::size_t i = 0; i < s.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t c = 0; c < s.ambient_dim(); ++c) {
            const auto& q = s.basis().at(i, c);
            row.push_back(BigInt(boost::multiprecision::numerator(q)).str() + "/" +
                          BigInt(boost::multiprecision::denominator(q)).str());
        }
        rows.push_back(std::move(row));
    }
    j["rref_rows"] = std::move(rows);
    return j;
}

Subspace<PrimeField> subspace_from_json(const Json& j) {
    const PrimeField f(j.at("p").get<std::uint32_t>());
    const auto ambient = j.at("ambient").get<std::size_t>();
    std::vector<std::vector<PrimeField::Elem>> rows;
    for (const auto& row : j.at("rref_rows")) {
        std::vector<PrimeField::Elem> r;
        for (const auto& x : row) r.push_back(f.from_int(x.get<std::int64_t>()));
        if (r.size() != ambient) throw std::invalid_argument("subspace_from_json: ragged row");
        rows.push_back(std::move(r));
    }
    return Subspace<PrimeField>::from_vectors(f, rows, ambient);
}

Json make_report(const std::string& command, Json params, Json results, Json bounds,
                 std::uint64_t seed, std::int64_t runtime_ms, bool include_runtime) {
    Json j;
    j["command"] = command;
    j["params"] = std::move(params);
    j["results"] = std::move(results);
    j["bounds"] = std::move(bounds);
    j["seed"] = seed;
    if (include_runtime) j["runtime_ms"] = runtime_ms;
    j["version"] = kVersion;
    return j;
}

void write_json(const Json& report, std::ostream& os) { os << report.dump(2) << "\n"; }

namespace {

void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            flatten(value, prefix.empty() ? key : prefix + "." + key, os);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "." + std::to_string(i), os);
    } else {
        os << prefix << ",";
        if (j.is_string())
            os << j.get<std::string>();
        else
            os << j.dump();
        os << "\n";
    }
}

}  // namespace

void write_csv(const Json& report, std::ostream& os) {
    os << "key,value\n";
    flatten(report, "", os);
}

}  // namespace wedgelab
