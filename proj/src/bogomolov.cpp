#include "wedgelab/bogomolov.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "wedgelab/intmatrix.hpp"
#include "wedgelab/rng.hpp"

namespace wedgelab {

unsigned ambient_to_d(std::size_t m) {
    for (unsigned d = 0; d <= 512; ++d)
        if (static_cast<std::size_t>(d) * (d - 1) / 2 == m) return d;
    throw std::invalid_argument("ambient_to_d: " + std::to_string(m) + " is not C(d,2)");
}

DecomposableLines::DecomposableLines(std::uint32_t p, unsigned d, std::uint64_t line_budget)
    : coords_(static_cast<std::size_t>(d) * (d - 1) / 2) {
    const auto n_lines = gaussian_binomial(d, 2, p).value;
    if (n_lines > BigInt(line_budget))
        throw BudgetExceeded("DecomposableLines: |Gr(2," + std::to_string(d) + ")| over F_" +
                             std::to_string(p) + " is " + n_lines.str() + " > budget " +
                             std::to_string(line_budget));

    const PrimeField f(p);
    const WedgeBasisIndex wb(d);
    count_ = static_cast<std::size_t>(n_lines);
    data_.resize(count_ * coords_);

    SubspaceStream planes(p, 2, d, line_budget);
    std::size_t at = 0;
    std::vector<PrimeField::Elem> u(d), v(d);
    planes.for_each([&](const PrimeField::Elem* basis) {
        for (unsigned j = 0; j < d; ++j) {
            u[j] = basis[j];
            v[j] = basis[d + j];
        }
        auto w = wedge(f, u, v, wb);
        // Normalize the leading coefficient to 1 so each projective line has
        // one canonical representative.
        std::size_t lead = 0;
        while (f.is_zero(w.c[lead])) ++lead;
        const auto s = f.inv(w.c[lead]);
        std::uint16_t* out = data_.data() + at * coords_;
        for (std::size_t i = 0; i < coords_; ++i)
            out[i] = static_cast<std::uint16_t>(f.mul(w.c[i], s));
        ++at;
    });

    // Fixed shuffle (seeded) so lexicographically clustered lines do not feed
    // membership scans long runs of dependent vectors.
    Rng rng(0x77ed6e5ab1ull);
    std::vector<std::uint16_t> tmp(coords_);
    for (std::size_t i = count_; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_below(i));
        if (j == i - 1) continue;
        auto* a = data_.data() + (i - 1) * coords_;
        auto* b = data_.data() + j * coords_;
        std::copy(a, a + coords_, tmp.data());
        std::copy(b, b + coords_, a);
        std::copy(tmp.data(), tmp.data() + coords_, b);
    }
}

ClosureEngine::ClosureEngine(PrimeField f, unsigned d, ClosureOptions options)
    : f_(f), d_(d), wb_(d), options_(options) {
    scratch_w_.resize(wb_.pair_count());
    scratch_sq_.resize(wb_.quad_count());
}

const DecomposableLines& ClosureEngine::lines() {
    if (!lines_)
        lines_ = std::make_unique<DecomposableLines>(f_.modulus(), d_,
                                                     options_.ambient_line_budget);
    return *lines_;
}

ClosureEngine::Strategy ClosureEngine::choose_strategy(std::size_t r) const {
    const BigInt p(f_.modulus());
    const BigInt points =
        (boost::multiprecision::pow(p, static_cast<unsigned>(r)) - 1) / (p - 1);
    const BigInt n_lines = gaussian_binomial(d_, 2, f_.modulus()).value;
    const bool points_ok = points <= BigInt(options_.point_budget);
    const bool ambient_ok = n_lines <= BigInt(options_.ambient_line_budget);
    if (points_ok && ambient_ok) return points <= n_lines ? Strategy::ScanPoints
                                                          : Strategy::ScanAmbient;
    if (points_ok) return Strategy::ScanPoints;
    if (ambient_ok) return Strategy::ScanAmbient;
    return Strategy::RandomSlice;
}

// Walk the projective points of L, feeding every decomposable vector found to
// the sink; the sink returns false to stop early.
template <class Sink>
void ClosureEngine::scan_points(const PrimeField::Elem* basis, std::size_t r, Sink&& sink) {
    const std::size_t m = wb_.pair_count();
    const std::uint32_t p = f_.modulus();
    std::vector<PrimeField::Elem>& a = scratch_coeff_;
    a.assign(r, 0);

    std::vector<PrimeField::Elem>& w = scratch_w_;
    for (std::size_t lead = 0; lead < r; ++lead) {
        std::fill(a.begin(), a.end(), 0);
        a[lead] = 1;
        for (;;) {
            // w = sum a_i basis_i (rows lead..r-1 contribute)
            const PrimeField::Elem* row = basis + lead * m;
            for (std::size_t j = 0; j < m; ++j) w[j] = row[j];
            for (std::size_t i = lead + 1; i < r; ++i) {
                if (a[i] == 0) continue;
                const PrimeField::Elem* ri = basis + i * m;
                const auto ai = a[i];
                for (std::size_t j = 0; j < m; ++j) w[j] = (w[j] + ai * ri[j]) % p;
            }
            // Decomposable iff the wedge square vanishes coordinate-wise.
            bool square_zero = true;
            for (std::size_t q = 0; q < wb_.quad_count() && square_zero; ++q) {
                const auto& s = wb_.quad_at(q);
                const auto v = w[wb_.pair_index(s[0], s[1])] * w[wb_.pair_index(s[2], s[3])] -
                               w[wb_.pair_index(s[0], s[2])] * w[wb_.pair_index(s[1], s[3])] +
                               w[wb_.pair_index(s[0], s[3])] * w[wb_.pair_index(s[1], s[2])];
                if (v % p != 0) square_zero = false;
            }
            if (square_zero) {
                if (!sink(w)) return;
            }
            // Odometer over the digits after the leading 1.
            std::size_t t = r;
            while (t-- > lead + 1) {
                if (++a[t] < static_cast<PrimeField::Elem>(p)) break;
                a[t] = 0;
            }
            if (t <= lead) break;
        }
    }
}

template <class Sink>
void ClosureEngine::scan_ambient(const PrimeField::Elem* basis, std::size_t r, Sink&& sink) {
    const std::size_t m = wb_.pair_count();
    Mat<PrimeField> bm(f_, r, m);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < m; ++j) bm.at(i, j) = basis[i * m + j];
    const auto ann = kernel_basis_mat(bm);  // w in L  <=>  ann . w = 0
    const std::size_t rho = ann.rows();
    const auto& dl = lines();
    const std::uint32_t p = f_.modulus();

    std::vector<PrimeField::Elem>& w = scratch_w_;
    for (std::size_t li = 0; li < dl.count(); ++li) {
        const std::uint16_t* wc = dl.line(li);
        bool member = true;
        for (std::size_t i = 0; i < rho && member; ++i) {
            const PrimeField::Elem* arow = ann.row_ptr(i);
            PrimeField::Elem acc = 0;
            for (std::size_t j = 0; j < m; ++j) acc += arow[j] * wc[j];
            if (acc % p != 0) member = false;
        }
        if (!member) continue;
        for (std::size_t j = 0; j < m; ++j) w[j] = wc[j];
        if (!sink(w)) return;
    }
}

std::size_t ClosureEngine::closure_dim(const PrimeField::Elem* basis, std::size_t r) {
    if (r == 0) return 0;
    const std::size_t m = wb_.pair_count();
    SpanAccumulator<PrimeField> span(f_, m);
    auto sink = [&](const std::vector<PrimeField::Elem>& w) {
        span.insert(w);
        return span.dim() < r;
    };
    switch (choose_strategy(r)) {
        case Strategy::ScanPoints:
            scan_points(basis, r, sink);
            return span.dim();
        case Strategy::ScanAmbient:
            scan_ambient(basis, r, sink);
            return span.dim();
        case Strategy::RandomSlice:
            break;
    }

    // Heuristic: enumerate random affine slices of the coefficient space of L,
    // restarting with fresh slices. Certifies only closure == L; inconclusive
    // runs fail hard rather than report a wrong closure.
    const std::uint32_t p = f_.modulus();
    Rng rng(options_.seed);
    const unsigned s = options_.slice_dim;
    std::vector<PrimeField::Elem> a(r), a0(r), t(s);
    std::vector<std::vector<PrimeField::Elem>> dirs(s, std::vector<PrimeField::Elem>(r));
    std::vector<PrimeField::Elem>& w = scratch_w_;
    for (unsigned restart = 0; restart < options_.restarts; ++restart) {
        for (auto& x : a0) x = static_cast<PrimeField::Elem>(rng.uniform_below(p));
        for (auto& dir : dirs)
            for (auto& x : dir) x = static_cast<PrimeField::Elem>(rng.uniform_below(p));
        std::fill(t.begin(), t.end(), 0);
        for (;;) {
            for (std::size_t i = 0; i < r; ++i) {
                PrimeField::Elem acc = a0[i];
                for (unsigned j = 0; j < s; ++j) acc += t[j] * dirs[j][i];
                a[i] = acc % p;
            }
            bool all_zero = true;
            for (auto x : a)
                if (x != 0) all_zero = false;
            if (!all_zero) {
                for (std::size_t j = 0; j < m; ++j) {
                    PrimeField::Elem acc = 0;
                    for (std::size_t i = 0; i < r; ++i) acc += a[i] * basis[i * m + j];
                    w[j] = acc % p;
                }
                bool square_zero = true;
                for (std::size_t q = 0; q < wb_.quad_count() && square_zero; ++q) {
                    const auto& sq = wb_.quad_at(q);
                    const auto v =
                        w[wb_.pair_index(sq[0], sq[1])] * w[wb_.pair_index(sq[2], sq[3])] -
                        w[wb_.pair_index(sq[0], sq[2])] * w[wb_.pair_index(sq[1], sq[3])] +
                        w[wb_.pair_index(sq[0], sq[3])] * w[wb_.pair_index(sq[1], sq[2])];
                    if (v % p != 0) square_zero = false;
                }
                if (square_zero && span.insert(w) && span.dim() == r) return r;
            }
            std::size_t j = s;
            while (j-- > 0) {
                if (++t[j] < static_cast<PrimeField::Elem>(p)) break;
                t[j] = 0;
            }
            bool wrapped = true;
            for (auto x : t)
                if (x != 0) wrapped = false;
            if (wrapped) break;
        }
    }
    throw BudgetExceeded(
        "decomposable_closure: exhaustive strategies over budget and the random-slice "
        "search did not certify a full span");
}

Subspace<PrimeField> ClosureEngine::closure_subspace(const Subspace<PrimeField>& L) {
    const std::size_t r = L.dim();
    const std::size_t m = wb_.pair_count();
    if (r == 0) return Subspace<PrimeField>::zero(f_, m);

    std::vector<PrimeField::Elem> basis(r * m);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < m; ++j) basis[i * m + j] = L.basis().at(i, j);

    SpanAccumulator<PrimeField> span(f_, m);
    auto sink = [&](const std::vector<PrimeField::Elem>& w) {
        span.insert(w);
        return span.dim() < r;
    };
    switch (choose_strategy(r)) {
        case Strategy::ScanPoints:
            scan_points(basis.data(), r, sink);
            break;
        case Strategy::ScanAmbient:
            scan_ambient(basis.data(), r, sink);
            break;
        case Strategy::RandomSlice: {
            if (closure_dim(basis.data(), r) == r) return L;
            throw BudgetExceeded("decomposable_closure: inconclusive heuristic");
        }
    }
    if (span.dim() == r) return L;  // already canonical
    return Subspace<PrimeField>::from_rows(span.to_matrix());
}

Subspace<PrimeField> decomposable_closure(const Subspace<PrimeField>& L,
                                          const ClosureOptions& options) {
    const unsigned d = ambient_to_d(L.ambient_dim());
    ClosureEngine engine(L.field(), d, options);
    return engine.closure_subspace(L);
}

GroupParameters::GroupParameters(PrimeField f, unsigned d, Subspace<PrimeField> L)
    : f_(f), d_(d), L_(std::move(L)), wb_(d) {
    if (L_.ambient_dim() != wb_.pair_count())
        throw std::invalid_argument("GroupParameters: L must live in Lambda^2 F_p^d");
    if (!(L_.field() == f_))
        throw std::invalid_argument("GroupParameters: field mismatch");
    section_cols_ = L_.non_pivots();
}

BigInt GroupParameters::group_order() const {
    return boost::multiprecision::pow(BigInt(f_.modulus()), d_ + rho());
}

std::vector<PrimeField::Elem> GroupParameters::project_to_section(
    std::vector<PrimeField::Elem> w_full) const {
    auto res = L_.reduce(std::move(w_full));
    std::vector<PrimeField::Elem> out(section_cols_.size());
    for (std::size_t i = 0; i < section_cols_.size(); ++i) out[i] = res[section_cols_[i]];
    return out;
}

B0Result bogomolov(const GroupParameters& params, const ClosureOptions& options) {
    ClosureEngine engine(params.field(), params.d(), options);
    auto closure = engine.closure_subspace(params.L());
    B0Result res{closure, params.L().dim() - closure.dim(), 0};
    res.b0_order = boost::multiprecision::pow(BigInt(params.field().modulus()),
                                              static_cast<unsigned>(res.b0_dim));
    return res;
}

namespace {

void require_lazard_window(const GroupParameters& params, const char* who) {
    if (params.field().modulus() <= 3)
        throw std::invalid_argument(std::string(who) + ": group model requires p > 3");
}

}  // namespace

ClassTwoElement group_identity(const GroupParameters& params) {
    return {std::vector<PrimeField::Elem>(params.d(), 0),
            std::vector<PrimeField::Elem>(params.rho(), 0)};
}

ClassTwoElement group_multiply(const GroupParameters& params, const ClassTwoElement& g,
                               const ClassTwoElement& h) {
    require_lazard_window(params, "group_multiply");
    const auto& f = params.field();
    const auto& wb = params.wedge_basis();

    auto w_full = wedge(f, g.v, h.v, wb);
    auto correction = params.project_to_section(std::move(w_full.c));

    ClassTwoElement out;
    out.v.resize(params.d());
    for (unsigned i = 0; i < params.d(); ++i) out.v[i] = f.add(g.v[i], h.v[i]);
    out.w.resize(params.rho());
    const auto half = f.half();
    for (unsigned i = 0; i < params.rho(); ++i)
        out.w[i] = f.add(f.add(g.w[i], h.w[i]), f.mul(half, correction[i]));
    return out;
}

ClassTwoElement group_commutator(const GroupParameters& params, const ClassTwoElement& g,
                                 const ClassTwoElement& h) {
    require_lazard_window(params, "group_commutator");
    const auto& f = params.field();
    auto w_full = wedge(f, g.v, h.v, params.wedge_basis());
    ClassTwoElement out;
    out.v.assign(params.d(), 0);
    out.w = params.project_to_section(std::move(w_full.c));
    return out;
}

ClassTwoElement group_power(const GroupParameters& params, const ClassTwoElement& g,
                            std::int64_t k) {
    require_lazard_window(params, "group_power");
    const auto& f = params.field();
    // g^k = (k v, k w): the BCH correction vanishes on parallel arguments.
    const auto kk = f.from_int(k);
    ClassTwoElement out;
    out.v.resize(params.d());
    out.w.resize(params.rho());
    for (unsigned i = 0; i < params.d(); ++i) out.v[i] = f.mul(kk, g.v[i]);
    for (unsigned i = 0; i < params.rho(); ++i) out.w[i] = f.mul(kk, g.w[i]);
    return out;
}

bool commutator_coset_surjectivity(const GroupParameters& params, std::uint64_t coset_budget) {
    const auto& f = params.field();
    const std::uint32_t p = f.modulus();
    const unsigned rho = params.rho();

    BigInt cosets = boost::multiprecision::pow(BigInt(p), rho);
    if (cosets > BigInt(coset_budget))
        throw BudgetExceeded("commutator_coset_surjectivity: p^rho = " + cosets.str() +
                             " > budget " + std::to_string(coset_budget));
    const std::size_t n_cosets = static_cast<std::size_t>(cosets);
    std::vector<bool> hit(n_cosets, false);
    hit[0] = true;  // the identity is the commutator of commuting elements
    std::size_t n_hit = 1;

    auto coset_index = [&](const std::vector<PrimeField::Elem>& section) {
        std::size_t idx = 0;
        for (unsigned i = 0; i < rho; ++i) idx = idx * p + static_cast<std::size_t>(section[i]);
        return idx;
    };

    DecomposableLines dl(p, params.d(), kDefaultEnumerationBudget);
    const std::size_t m = params.wedge_basis().pair_count();
    std::vector<PrimeField::Elem> w(m);
    for (std::size_t li = 0; li < dl.count() && n_hit < n_cosets; ++li) {
        const std::uint16_t* wc = dl.line(li);
        for (std::uint32_t c = 1; c < p; ++c) {
            for (std::size_t j = 0; j < m; ++j)
                w[j] = static_cast<PrimeField::Elem>(wc[j]) * c % p;
            const auto idx = coset_index(params.project_to_section(w));
            if (!hit[idx]) {
                hit[idx] = true;
                ++n_hit;
            }
        }
    }
    return n_hit == n_cosets;
}

bool jacobi_absorption_check(const GroupParameters& params, std::uint64_t point_budget) {
    const auto& f = params.field();
    const std::uint32_t p = f.modulus();
    const unsigned d = params.d();
    const unsigned rho = params.rho();
    const unsigned n = d + rho;
    if (n > 8)
        throw BudgetExceeded("jacobi_absorption_check: dim(V + W/L) = " + std::to_string(n) +
                             " > 8");
    const BigInt points = (boost::multiprecision::pow(BigInt(p), n) - 1) / (p - 1);
    if (points > BigInt(point_budget))
        throw BudgetExceeded("jacobi_absorption_check: too many projective points");

    const WedgeBasisIndex wbn(n);
    const std::size_t m2 = wbn.pair_count();

    // Bracket of basis vectors: [x_a, x_b] has only W/L-section coordinates,
    // and vanishes unless both arguments come from V.
    std::vector<std::vector<PrimeField::Elem>> bracket(d * d);
    {
        const auto& wb = params.wedge_basis();
        for (unsigned a = 0; a < d; ++a)
            for (unsigned b = 0; b < d; ++b) {
                std::vector<PrimeField::Elem> w_full(wb.pair_count(), 0);
                if (a != b) {
                    const auto idx = a < b ? wb.pair_index(a, b) : wb.pair_index(b, a);
                    w_full[idx] = a < b ? 1 : p - 1;
                }
                bracket[a * d + b] = params.project_to_section(std::move(w_full));
            }
    }

    // kappa: Lambda^2 L -> L as an n x C(n,2) matrix over the wedge basis.
    Mat<PrimeField> kappa(f, n, m2);
    for (std::size_t idx = 0; idx < m2; ++idx) {
        const auto [a, b] = wbn.pair_at(idx);
        if (a < d && b < d) {
            const auto& z = bracket[a * d + b];
            for (unsigned i = 0; i < rho; ++i) kappa.at(d + i, idx) = z[i];
        }
    }
    const auto ker_kappa = kernel_basis(kappa);

    // Image of the Jacobi map on basis triples.
    Mat<PrimeField> theta_rows(f, 0, m2);
    auto wedge_into = [&](const std::vector<PrimeField::Elem>& zpart, unsigned c,
                          std::vector<PrimeField::Elem>& acc) {
        // acc += (0, zpart) ^ e_c in Lambda^2 coordinates
        for (unsigned i = 0; i < rho; ++i) {
            const unsigned a = d + i;
            if (f.is_zero(zpart[i]) || a == c) continue;
            if (a < c)
                acc[wbn.pair_index(a, c)] = f.add(acc[wbn.pair_index(a, c)], zpart[i]);
            else
                acc[wbn.pair_index(c, a)] = f.sub(acc[wbn.pair_index(c, a)], zpart[i]);
        }
    };
    for (unsigned a = 0; a < n; ++a)
        for (unsigned b = a + 1; b < n; ++b)
            for (unsigned c = b + 1; c < n; ++c) {
                std::vector<PrimeField::Elem> row(m2, 0);
                if (a < d && b < d) wedge_into(bracket[a * d + b], c, row);
                if (b < d && c < d) wedge_into(bracket[b * d + c], a, row);
                if (c < d && a < d) wedge_into(bracket[c * d + a], b, row);
                theta_rows.append_row(row);
            }
    const auto im_theta = Subspace<PrimeField>::from_rows(std::move(theta_rows));

    // <D cap ker kappa> = sum over projective x of x ^ centralizer(x); stop as
    // soon as the span reaches dim ker kappa, which it can never exceed.
    SpanAccumulator<PrimeField> span(f, m2);
    std::vector<PrimeField::Elem> x(n, 0);
    for (unsigned lead = 0; lead < n && span.dim() < ker_kappa.dim(); ++lead) {
        std::fill(x.begin(), x.end(), 0);
        x[lead] = 1;
        for (;;) {
            // ad_x as a rho x n matrix; columns beyond V vanish.
            Mat<PrimeField> ad(f, rho, n);
            for (unsigned b = 0; b < d; ++b)
                for (unsigned a2 = 0; a2 < d; ++a2) {
                    if (f.is_zero(x[a2])) continue;
                    const auto& z = bracket[a2 * d + b];
                    for (unsigned i = 0; i < rho; ++i)
                        ad.at(i, b) = f.add(ad.at(i, b), f.mul(x[a2], z[i]));
                }
            const auto cent = kernel_basis_mat(ad);
            for (std::size_t yi = 0; yi < cent.rows(); ++yi) {
                auto w = wedge(f, x, cent.row(yi), wbn);
                if (!w.is_zero(f)) span.insert(w.c);
            }
            if (span.dim() == ker_kappa.dim()) break;

            std::size_t t = n;
            while (t-- > lead + 1) {
                if (++x[t] < static_cast<PrimeField::Elem>(p)) break;
                x[t] = 0;
            }
            if (t <= lead) break;
        }
    }

    for (std::size_t i = 0; i < im_theta.dim(); ++i)
        if (!span.contains(im_theta.basis().row(i))) return false;
    return true;
}

namespace {

// Primitive integer direction solutions of q_aa a^2 + q_ab ab + q_bb b^2 = 0,
// sign-normalized so the first nonzero coordinate is positive.
std::vector<std::pair<BigInt, BigInt>> primitive_quadric_directions(const BigInt& q_aa,
                                                                    const BigInt& q_ab,
                                                                    const BigInt& q_bb) {
    using boost::multiprecision::gcd;
    using boost::multiprecision::sqrt;
    std::vector<std::pair<BigInt, BigInt>> out;
    auto push = [&out](BigInt a, BigInt b) {
        if (a == 0 && b == 0) return;
        BigInt g = gcd(boost::multiprecision::abs(a), boost::multiprecision::abs(b));
        a /= g;
        b /= g;
        if (a < 0 || (a == 0 && b < 0)) {
            a = -a;
            b = -b;
        }
        for (const auto& [x, y] : out)
            if (x == a && y == b) return;
        out.emplace_back(std::move(a), std::move(b));
    };

    if (q_aa == 0 && q_ab == 0 && q_bb == 0)
        throw std::invalid_argument("primitive_quadric_directions: identically zero form");
    if (q_aa == 0) {
        push(1, 0);                       // b = 0
        if (q_ab != 0) push(-q_bb, q_ab); // q_ab a + q_bb b = 0
        return out;
    }
    const BigInt disc = q_ab * q_ab - 4 * q_aa * q_bb;
    if (disc < 0) return out;
    const BigInt s = sqrt(disc);
    if (s * s != disc) return out;  // irrational roots: no integer directions
    push(-q_ab + s, 2 * q_aa);
    push(-q_ab - s, 2 * q_aa);
    return out;
}

}  // namespace

TorsionWitnessD4 torsion_witness_d4(std::uint32_t p) {
    if (p < 3 || !is_prime(p))
        throw std::invalid_argument("torsion_witness_d4: p must be an odd prime");
    const RationalField f;
    const WedgeBasisIndex wb(4);

    // g1 = e1^e2, g2 = e3^e2 + e1^e4 + p e3^e4, exact over Z.
    Wedge2Vector<RationalField> g1, g2;
    g1.c.assign(wb.pair_count(), f.zero());
    g2.c.assign(wb.pair_count(), f.zero());
    g1.c[wb.pair_index(0, 1)] = 1;
    g2.c[wb.pair_index(1, 2)] = -1;  // e3^e2 = -(e2^e3)
    g2.c[wb.pair_index(0, 3)] = 1;
    g2.c[wb.pair_index(2, 3)] = BigRational(p);

    // Binary quadric of the wedge square on a g1 + b g2; d = 4 has a single
    // Lambda^4 coordinate.
    const auto sq1 = wedge_square(f, g1, wb);
    const auto cross = wedge2_product(f, g1, g2, wb);
    const auto sq2 = wedge_square(f, g2, wb);
    auto to_int = [](const BigRational& q) {
        if (boost::multiprecision::denominator(q) != 1)
            throw std::logic_error("torsion_witness_d4: non-integer quadric coefficient");
        return BigInt(boost::multiprecision::numerator(q));
    };
    TorsionWitnessD4 res;
    res.quadric = {to_int(sq1.c[0]), to_int(cross.c[0]) * 2, to_int(sq2.c[0])};
    res.directions =
        primitive_quadric_directions(res.quadric[0], res.quadric[1], res.quadric[2]);

    if (res.directions.size() != 2)
        throw std::logic_error("torsion_witness_d4: expected exactly two solution directions");
    IntMatrix lattice(2, 2);
    for (std::size_t i = 0; i < 2; ++i) {
        lattice.at(i, 0) = res.directions[i].first;
        lattice.at(i, 1) = res.directions[i].second;
    }
    res.snf_divisors = smith_normal_form(std::move(lattice));
    res.sk1_order_over_Zp = 1;
    for (const auto& dd : res.snf_divisors) {
        if (dd == 0) throw std::logic_error("torsion_witness_d4: solution lattice is degenerate");
        res.sk1_order_over_Zp *= dd;
    }

    // Over Q the two decomposables e1^e2 and (e1 + p e3)^(e2 + p e4) span L.
    auto L = Subspace<RationalField>::from_vectors(f, {g1.c, g2.c}, wb.pair_count());
    std::vector<BigRational> u = {1, 0, BigRational(p), 0};
    std::vector<BigRational> v = {0, 1, 0, BigRational(p)};
    const auto w2 = wedge(f, u, v, wb);
    SpanAccumulator<RationalField> span(f, wb.pair_count());
    span.insert(g1.c);
    span.insert(w2.c);
    res.sk1_trivial_over_Qp = L.contains(g1.c) && L.contains(w2.c) && span.dim() == L.dim();
    return res;
}

}  // namespace wedgelab
