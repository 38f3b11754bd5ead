#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>

#include "ellrank/errors.hpp"
#include "ellrank/oracle.hpp"
#include "oracle_internal.hpp"

namespace ellrank {

// ---- fast norms by evaluation + interpolation ----------------------------

NormCalculator::NormCalculator(const CurveParams& params, unsigned max_norm_degree, std::uint64_t seed)
    : params_(params), max_deg_(max_norm_degree) {
    // evaluation field with more points than the norm degree
    unsigned k = 1;
    mpz_class pts = params.field->size();
    while (pts <= max_deg_ + 1) {
        ++k;
        pts *= params.field->size();
    }
    K_ = make_extension(params.field, k, seed);
    const unsigned n = max_deg_ + 1;
    points_.reserve(n);
    for (unsigned s = 0; s < n; ++s) points_.push_back(K_->from_uint(s));
    f_at_.reserve(n);
    for (unsigned s = 0; s < n; ++s) f_at_.push_back(eval_embedded(params.f, points_[s]));
    // lagrange_[s] = w_s * prod_{t != s} (x - x_t), with w_s the inverse of
    // prod_{t != s}(x_s - x_t)
    std::vector<FieldElem> master{K_->one()};
    for (unsigned t = 0; t < n; ++t) {
        master.insert(master.begin(), K_->zero());
        for (unsigned i = 0; i + 1 < master.size(); ++i) master[i] -= points_[t] * master[i + 1];
    }
    lagrange_.resize(n);
    for (unsigned s = 0; s < n; ++s) {
        // synthetic division of master by (x - x_s)
        std::vector<FieldElem> qs(n, K_->zero());
        FieldElem carry = master[n];
        for (unsigned i = n; i-- > 0;) {
            qs[i] = carry;
            carry = master[i] + carry * points_[s];
        }
        FieldElem denom = K_->zero();
        {  // q_s(x_s)
            FieldElem acc = K_->zero();
            for (unsigned i = n; i-- > 0;) {
                acc *= points_[s];
                acc += qs[i];
            }
            denom = acc;
        }
        FieldElem w = inv(denom);
        for (auto& c : qs) c *= w;
        lagrange_[s] = std::move(qs);
    }
    mpz_class Q = params.field->size();
    for (std::uint64_t v = 0; v < Q.get_ui(); ++v) {
        FieldElem u = params.field->from_uint(v);
        descent_[rawgf::key_of(*K_, K_->embed(u).coeffs())] = u;
    }
}

namespace {

// Res(A, B) for y-polynomials over a field, Euclidean recurrence.
FieldElem scalar_resultant(std::vector<FieldElem> A, std::vector<FieldElem> B, const FieldCtxPtr& K) {
    auto deg = [](const std::vector<FieldElem>& v) {
        int d = static_cast<int>(v.size()) - 1;
        while (d >= 0 && v[d].is_zero()) --d;
        return d;
    };
    FieldElem res = K->one();
    int da = deg(A), db = deg(B);
    if (da < 0 || db < 0) return K->zero();
    for (;;) {
        if (db == 0) {
            res *= pow(B[0], static_cast<std::uint64_t>(da));
            return res;
        }
        // A mod B
        FieldElem lb_inv = inv(B[db]);
        std::vector<FieldElem> R = A;
        int dr = da;
        while (dr >= db) {
            FieldElem c = R[dr] * lb_inv;
            if (!c.is_zero()) {
                for (int i = 0; i <= db; ++i) R[dr - db + i] -= c * B[i];
            }
            --dr;
            while (dr >= 0 && R[dr].is_zero()) --dr;
        }
        if (dr < 0) return K->zero();  // common factor
        if ((da % 2) && (db % 2)) res = -res;
        res *= pow(B[db], static_cast<std::uint64_t>(da - dr));
        A = std::move(B);
        da = db;
        B.assign(R.begin(), R.begin() + dr + 1);
        db = dr;
    }
}

}  // namespace

Poly NormCalculator::norm(const std::vector<Poly>& z) const {
    int dz = static_cast<int>(z.size()) - 1;
    while (dz >= 0 && z[dz].is_zero()) --dz;
    if (dz <= 1) return resultant_y(params_.ell, params_.f, z);
    const unsigned n = max_deg_ + 1;
    std::vector<FieldElem> acc(n, K_->zero());
    std::vector<FieldElem> A(params_.ell + 1, K_->zero());
    A[params_.ell] = K_->one();
    for (unsigned s = 0; s < n; ++s) {
        A[0] = -f_at_[s];
        std::vector<FieldElem> zs(dz + 1, K_->zero());
        for (int j = 0; j <= dz; ++j)
            zs[j] = z[j].is_zero() ? K_->zero() : eval_embedded(z[j], points_[s]);
        // specialization is exact for monic A even when deg zs drops
        FieldElem r = scalar_resultant(A, zs, K_);
        if (!r.is_zero())
            for (unsigned i = 0; i < n; ++i) acc[i] += r * lagrange_[s][i];
    }
    std::vector<FieldElem> coeffs;
    coeffs.reserve(n);
    for (unsigned i = 0; i < n; ++i) {
        auto it = descent_.find(rawgf::key_of(*K_, acc[i].coeffs()));
        if (it == descent_.end()) throw inconsistency_error("NormCalculator: interpolated norm not over F_q");
        coeffs.push_back(it->second);
    }
    return Poly(params_.field, std::move(coeffs));
}

// ---- relation search ------------------------------------------------------

namespace {

enum class SmoothShape { none, full, one_large };

// Distinct-degree prescreen after stripping the f-part: everything must peel
// at degrees <= col_bound, except possibly one irreducible of degree in
// (col_bound, rec_bound] (with any multiplicity).
SmoothShape smooth_shape(const Poly& norm, const Poly& f, unsigned col_bound, unsigned rec_bound) {
    Poly w = make_monic(norm);
    for (;;) {
        auto [q, r] = divmod(w, f);
        if (!r.is_zero()) break;
        w = q;
    }
    if (w.degree() == 0) return SmoothShape::full;
    const mpz_class& Q = w.ctx()->size();
    Poly u = powmod(Poly::x(w.ctx()), Q, w);
    bool large_seen = false;
    for (unsigned dd = 1; dd <= rec_bound && w.degree() > 0; ++dd) {
        if (dd > 1) u = powmod(u, Q, w);
        Poly g = poly_gcd(u - Poly::x(w.ctx()), w);
        if (g.degree() > 0 && dd > col_bound) {
            // each distinct irreducible above the column bound counts as large
            if (large_seen || static_cast<unsigned>(g.degree()) != dd) return SmoothShape::none;
            large_seen = true;
        }
        while (g.degree() > 0) {
            w = divexact(w, g);
            g = poly_gcd(g, w);
        }
        u = poly_mod(u, w);
    }
    if (w.degree() != 0) return SmoothShape::none;
    return large_seen ? SmoothShape::one_large : SmoothShape::full;
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

// Deterministic stream of factor-base relations: structural rows first, then
// seeded principal ideals (z). Random candidates cycle over a slowly widening
// norm-degree window; interleaved targeted candidates are constructed inside
// an under-constrained prime so the remaining norm cofactor stays small.
class RelationStream {
  public:
    RelationStream(const FactorBase& fb, std::uint64_t seed)
        : fb_(fb),
          t_min_(std::max<unsigned>(fb.params.d + fb.params.ell, 2 * fb.degree_bound)),
          t_cap_(std::max<unsigned>(t_min_ + 8, std::min(50u, 3 * fb.params.ell + fb.params.d + 2 * fb.degree_bound))),
          norm_(fb.params, t_cap_ + 2 * fb.params.ell, seed),
          seed_(seed),
          rng_state_(splitmix(seed ^ 0x243f6a8885a308d3ULL)) {
        structural_.push_back({{fb.ramified_column, 1}});  // div(y) = (f, y)
        for (auto& [pi_str, range] : fb.by_pi) {
            auto [begin, end] = range;
            bool complete = true;
            for (int i = begin; i < end; ++i) complete = complete && fb.primes[i].in_factor_base;
            if (!complete) continue;
            std::map<int, long> row;
            for (int i = begin; i < end; ++i) row[fb.column[i]] = 1;
            structural_.push_back(std::move(row));
        }
    }

    std::optional<std::map<int, long>> next(std::uint64_t trial_cap, RelationSearchStats* stats) {
        while (!structural_.empty()) {
            auto row = std::move(structural_.back());
            structural_.pop_back();
            if (accept(row)) return row;
        }
        const CurveParams& P = fb_.params;
        for (std::uint64_t used = 0; used < trial_cap; ++used) {
            rng_state_ = splitmix(rng_state_ + 0x51ed2701);
            std::uint64_t r0 = rng_state_;
            ++index_;
            if (stats) ++stats->trials;
            std::vector<Poly> z = random_candidate(r0);
            if (z.empty()) continue;
            if (norm_degree_bound(z) > norm_.max_degree()) continue;
            Poly N = norm_.norm(z);
            if (N.is_zero()) continue;
            if (smooth_shape(N, P.f, fb_.degree_bound, fb_.record_bound) == SmoothShape::none) continue;
            auto val = valuations_one_large(fb_, z, N, seed_);
            if (!val) continue;
            if (stats) ++stats->smooth;
            if (val->large_key.empty()) {
                if (accept(val->cols)) return val->cols;
                continue;
            }
            // single-large-prime partial: pair it against the stored anchor
            auto anchor = partials_.find(val->large_key);
            if (anchor == partials_.end()) {
                partials_.emplace(val->large_key, std::make_pair(val->cols, val->large_val));
                continue;
            }
            const auto& [row0, v0] = anchor->second;
            long g = std::gcd(v0, val->large_val);
            long a = v0 / g, b = val->large_val / g;
            // b*(anchor) - a*(new) cancels the large prime
            std::map<int, long> combined;
            for (auto& [c, v] : row0) combined[c] += b * v;
            for (auto& [c, v] : val->cols) combined[c] -= a * v;
            for (auto it = combined.begin(); it != combined.end();)
                it = it->second == 0 ? combined.erase(it) : std::next(it);
            if (combined.empty()) continue;
            if (accept(combined)) return combined;
        }
        return std::nullopt;
    }

    std::uint64_t trials() const { return index_; }

  private:
    bool accept(const std::map<int, long>& row) {
        std::ostringstream key;
        for (auto& [c, v] : row) key << c << ':' << v << ';';
        return seen_.insert(key.str()).second;
    }

    std::uint64_t rnd(std::uint64_t& s) const {
        s = splitmix(s);
        return s;
    }

    unsigned norm_degree_bound(const std::vector<Poly>& z) const {
        long best = 0;
        for (std::size_t j = 0; j < z.size(); ++j) {
            if (z[j].is_zero()) continue;
            long t = static_cast<long>(fb_.params.ell) * z[j].degree() + static_cast<long>(j) * fb_.params.d;
            best = std::max(best, t);
        }
        return static_cast<unsigned>(best);
    }

    std::vector<Poly> random_candidate(std::uint64_t s) {
        const CurveParams& P = fb_.params;
        std::uint64_t Q = P.field->size().get_ui();
        unsigned span = std::min<unsigned>(t_cap_ - t_min_, 2 + static_cast<unsigned>(index_ >> 11));
        unsigned T = t_min_ + static_cast<unsigned>(rnd(s) % (span + 1));
        unsigned dymax = std::min<unsigned>(P.ell - 1, std::max<unsigned>(1, T / P.d));
        unsigned dy = 1 + static_cast<unsigned>(rnd(s) % dymax);
        std::vector<Poly> z(dy + 1, Poly(P.field));
        bool any_y = false;
        for (unsigned j = 0; j <= dy; ++j) {
            long bj = (static_cast<long>(T) - static_cast<long>(j) * P.d) / static_cast<long>(P.ell);
            if (bj < 0) continue;
            std::vector<FieldElem> c(bj + 1, P.field->zero());
            for (long t = 0; t <= bj; ++t) c[t] = P.field->from_uint(rnd(s) % Q);
            z[j] = Poly(P.field, std::move(c));
            if (j >= 1 && !z[j].is_zero()) any_y = true;
        }
        if (!any_y) return {};
        return z;
    }

    const FactorBase& fb_;
    unsigned t_min_, t_cap_;
    NormCalculator norm_;
    std::uint64_t seed_;
    std::uint64_t index_ = 0;
    std::uint64_t rng_state_;
    std::set<std::string> seen_;
    std::vector<std::map<int, long>> structural_;
    std::map<std::string, std::pair<std::map<int, long>, long>> partials_;
};

SparseMatrix find_relations(const FactorBase& fb, std::size_t target_rows, std::uint64_t trial_budget,
                            std::uint64_t seed, RelationSearchStats* stats) {
    SparseMatrix M;
    M.ncols = fb.ncols;
    RelationStream stream(fb, seed);
    while (M.rows.size() < target_rows && stream.trials() < trial_budget) {
        auto rel = stream.next(trial_budget - stream.trials(), stats);
        if (!rel) break;
        std::map<int, mpz_class> row;
        for (auto& [c, v] : *rel) row[c] = v;
        M.rows.push_back(std::move(row));
    }
    return M;
}

// ---- class group assembly --------------------------------------------------

namespace {

struct SnfOutcome {
    mpz_class order = 0;  // 0 encodes rank deficiency
    std::vector<mpz_class> divisors;
};

SnfOutcome group_from_rows(const std::vector<std::map<int, mpz_class>>& rows, int ncols) {
    // Generators no relation touches carry no information; drop them. The
    // order certificate h = L(1) still proves that the touched generators
    // span the whole class group when it lands.
    std::vector<bool> touched(ncols, false);
    for (const auto& r : rows)
        for (const auto& [c, v] : r)
            if (v != 0) touched[c] = true;
    std::vector<int> remap(ncols, -1);
    int live = 0;
    for (int c = 0; c < ncols; ++c)
        if (touched[c]) remap[c] = live++;
    SparseMatrix M;
    M.ncols = live;
    for (const auto& r : rows) {
        std::map<int, mpz_class> row;
        for (const auto& [c, v] : r)
            if (v != 0) row[remap[c]] = v;
        if (!row.empty()) M.rows.push_back(std::move(row));
    }
    auto [dense, nc] = presolve_units(std::move(M));
    SnfOutcome out;
    if (nc == 0) {
        out.order = 1;
        return out;
    }
    if (static_cast<int>(dense.size()) < nc) {
        out.order = 0;
        return out;
    }
    auto diag = snf_diagonal(std::move(dense));
    mpz_class order = 1;
    std::vector<mpz_class> div;
    for (int i = 0; i < nc; ++i) {
        mpz_class d = (i < static_cast<int>(diag.size())) ? diag[i] : mpz_class(0);
        if (d == 0) {
            out.order = 0;
            return out;
        }
        order *= d;
        if (d > 1) div.push_back(d);
    }
    std::sort(div.begin(), div.end());
    out.order = order;
    out.divisors = std::move(div);
    return out;
}

// With single-large-prime pairing the column base stays small: enough small
// primes to generate the group, with escalation as the safety net.
unsigned auto_degree_bound(const CurveParams& params, unsigned max_bound) {
    mpz_class want = mpz_class(static_cast<unsigned long>(params.genus)) + 10;
    mpz_class cum = 0;
    unsigned cap = std::min<unsigned>(max_bound, std::max<unsigned>(2, static_cast<unsigned>(params.genus) + 1));
    for (unsigned B = 1; B <= cap; ++B) {
        cum += count_monic_irreducible(params.field->size(), B);
        if (B >= 2 && cum >= want) return B;
    }
    return cap;
}

}  // namespace

ClassGroupStruct class_group(const CurveParams& params, const LPoly& L, const OracleOptions& opts) {
    mpz_class h = L.class_number();
    if (opts.max_h != 0 && h > opts.max_h)
        throw resource_limit_error("class_group: class number exceeds the configured budget");
    unsigned B = opts.initial_degree_bound ? opts.initial_degree_bound
                                           : auto_degree_bound(params, opts.max_degree_bound);
    std::string last_state = "no attempt";
    for (; B <= opts.max_degree_bound; ++B) {
        FactorBase fb = build_factor_base(params, B, opts.seed, B + opts.large_prime_margin);
        RelationStream stream(fb, opts.seed);
        std::vector<std::map<int, mpz_class>> rows;
        std::size_t target = fb.ncols + std::max<std::size_t>(16, fb.ncols / 4);
        bool escalate = false;
        while (!escalate) {
            while (rows.size() < target && stream.trials() < opts.relation_budget) {
                auto rel = stream.next(opts.relation_budget - stream.trials(), nullptr);
                if (!rel) break;
                std::map<int, mpz_class> row;
                for (auto& [c, v] : *rel) row[c] = v;
                rows.push_back(std::move(row));
            }
            SnfOutcome got = group_from_rows(rows, fb.ncols);
            if (std::getenv("ELLRANK_DEBUG"))
                std::fprintf(stderr, "[class_group] B=%u ncols=%d rows=%zu trials=%llu order=%s h=%s\n", B, fb.ncols,
                             rows.size(), static_cast<unsigned long long>(stream.trials()),
                             got.order.get_str().c_str(), h.get_str().c_str());
            if (got.order == h) {
                ClassGroupStruct out;
                out.divisors = std::move(got.divisors);
                out.h = h;
                out.certified = true;
                mpz_class check = 1;
                for (auto& d : out.divisors) check *= d;
                if (check != h) throw inconsistency_error("class_group: divisor product mismatch");
                return out;
            }
            if (got.order != 0 && got.order < h) {
                // factor base does not generate; a larger base is needed
                last_state = "subgroup of order " + got.order.get_str() + " < h";
                escalate = true;
                break;
            }
            // rank deficiency or lattice index still > 1: need more relations
            if (stream.trials() >= opts.relation_budget) {
                last_state = got.order == 0 ? "rank-deficient lattice" : ("lattice order " + got.order.get_str());
                escalate = true;
                break;
            }
            target = rows.size() + std::max<std::size_t>(16, fb.ncols / 4);
        }
    }
    throw oracle_unavailable_error("class_group: not certified within budget (" + last_state + ", h=" + h.get_str() +
                                   ")");
}

unsigned ell_rank(const ClassGroupStruct& group, std::uint32_t ell) {
    if (!group.certified) throw std::invalid_argument("ell_rank: group not certified");
    unsigned r = 0;
    for (const auto& d : group.divisors)
        if (mpz_divisible_ui_p(d.get_mpz_t(), ell)) ++r;
    return r;
}

OracleReport run_oracle(const CurveParams& params, const OracleOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    OracleReport rep;
    rep.L = l_polynomial(params, opts.seed, opts.point_budget);
    verify_lpoly(params, rep.L, std::min<std::uint64_t>(opts.point_budget, 1ull << 16), opts.seed);
    rep.group = class_group(params, rep.L, opts);
    rep.rank = ell_rank(rep.group, params.ell);
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace ellrank
