#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "ellrank/errors.hpp"
#include "ellrank/oracle.hpp"
#include "oracle_internal.hpp"

namespace ellrank {

namespace detail {

ResiduePullback::ResiduePullback(const FieldCtxPtr& field_, const FieldCtxPtr& Km_, const FieldElem& x_img,
                                 unsigned m_)
    : field(field_), Km(Km_), m(m_) {
    const std::uint32_t p = field->p();
    const unsigned e = field->degree();
    const unsigned n = e * m;
    if (Km->degree() != n) throw inconsistency_error("ResiduePullback: dimension mismatch");
    // columns: embed(gq^r) * x_img^t for t < m, r < e
    std::vector<std::vector<std::uint32_t>> A(n, std::vector<std::uint32_t>(n, 0));
    FieldElem xpow = Km->one();
    for (unsigned t = 0; t < m; ++t) {
        FieldElem gq_pow = field->one();
        for (unsigned r = 0; r < e; ++r) {
            FieldElem col = Km->embed(gq_pow) * xpow;
            for (unsigned row = 0; row < n; ++row) A[row][t * e + r] = col.coeffs()[row];
            gq_pow *= field->gen();
        }
        xpow *= x_img;
    }
    // Gauss-Jordan inverse mod p
    auto invp = [p](std::uint32_t x) {
        std::uint64_t r = 1, b = x, ee = p - 2;
        while (ee) {
            if (ee & 1) r = r * b % p;
            b = b * b % p;
            ee >>= 1;
        }
        return static_cast<std::uint32_t>(r);
    };
    std::vector<std::vector<std::uint32_t>> I(n, std::vector<std::uint32_t>(n, 0));
    for (unsigned i = 0; i < n; ++i) I[i][i] = 1;
    for (unsigned c = 0; c < n; ++c) {
        unsigned piv = c;
        while (piv < n && A[piv][c] == 0) ++piv;
        if (piv == n) throw inconsistency_error("ResiduePullback: singular basis matrix");
        std::swap(A[piv], A[c]);
        std::swap(I[piv], I[c]);
        std::uint64_t s = invp(A[c][c]);
        for (unsigned j = 0; j < n; ++j) {
            A[c][j] = static_cast<std::uint32_t>(A[c][j] * s % p);
            I[c][j] = static_cast<std::uint32_t>(I[c][j] * s % p);
        }
        for (unsigned i2 = 0; i2 < n; ++i2) {
            if (i2 == c || A[i2][c] == 0) continue;
            std::uint64_t fct = A[i2][c];
            for (unsigned j = 0; j < n; ++j) {
                A[i2][j] = static_cast<std::uint32_t>((A[i2][j] + (p - fct % p) * A[c][j]) % p);
                I[i2][j] = static_cast<std::uint32_t>((I[i2][j] + (p - fct % p) * I[c][j]) % p);
            }
        }
    }
    inv = std::move(I);
}

Poly ResiduePullback::pull(const FieldElem& w) const {
    const std::uint32_t p = field->p();
    const unsigned e = field->degree();
    const unsigned n = e * m;
    std::vector<std::uint32_t> sol(n, 0);
    for (unsigned i = 0; i < n; ++i) {
        std::uint64_t acc = 0;
        for (unsigned j = 0; j < n; ++j) acc += static_cast<std::uint64_t>(inv[i][j]) * w.coeffs()[j];
        sol[i] = static_cast<std::uint32_t>(acc % p);
    }
    std::vector<FieldElem> c;
    c.reserve(m);
    for (unsigned t = 0; t < m; ++t) {
        std::vector<std::uint32_t> digits(sol.begin() + t * e, sol.begin() + (t + 1) * e);
        c.push_back(field->from_coeffs(std::move(digits)));
    }
    return Poly(field, std::move(c));
}

}  // namespace detail

namespace {

using detail::ResiduePullback;

// ---- y-polynomials over F_q[x]/(pi^M) ------------------------------------

struct PadicCtx {
    Poly piM;  // pi^M
    Poly reduce(const Poly& a) const { return poly_mod(a, piM); }
};

using RPoly = std::vector<Poly>;  // y-coefficients, may carry zero tails

int rdeg(const RPoly& a) {
    int d = static_cast<int>(a.size()) - 1;
    while (d >= 0 && a[d].is_zero()) --d;
    return d;
}

RPoly rp_mul(const PadicCtx& R, const RPoly& a, const RPoly& b) {
    int da = rdeg(a), db = rdeg(b);
    if (da < 0 || db < 0) return {};
    const auto& ctx = R.piM.ctx();
    RPoly out(da + db + 1, Poly(ctx));
    for (int i = 0; i <= da; ++i) {
        if (a[i].is_zero()) continue;
        for (int j = 0; j <= db; ++j) out[i + j] += a[i] * b[j];
    }
    for (auto& c : out) c = R.reduce(c);
    return out;
}

RPoly rp_add(const PadicCtx& R, const RPoly& a, const RPoly& b) {
    RPoly out = a;
    if (out.size() < b.size()) out.resize(b.size(), Poly(R.piM.ctx()));
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = R.reduce(out[i] + b[i]);
    return out;
}

RPoly rp_sub(const PadicCtx& R, const RPoly& a, const RPoly& b) {
    RPoly out = a;
    if (out.size() < b.size()) out.resize(b.size(), Poly(R.piM.ctx()));
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = R.reduce(out[i] - b[i]);
    return out;
}

// division by a monic divisor (leading y-coefficient literally 1)
void rp_divmod(const PadicCtx& R, const RPoly& a, const RPoly& b, RPoly& quo, RPoly& rem) {
    int db = rdeg(b);
    if (db < 0 || !b[db].is_monic() || b[db].degree() != 0)
        throw inconsistency_error("rp_divmod: divisor must be monic in y");
    rem = a;
    for (auto& c : rem) c = R.reduce(c);
    int da = rdeg(rem);
    quo.assign(da >= db ? da - db + 1 : 0, Poly(R.piM.ctx()));
    while ((da = rdeg(rem)) >= db) {
        Poly c = rem[da];
        int shift = da - db;
        quo[shift] = R.reduce(quo[shift] + c);
        for (int i = 0; i <= db; ++i) rem[shift + i] = R.reduce(rem[shift + i] - c * b[i]);
    }
    rem.resize(db >= 0 ? db : 0, Poly(R.piM.ctx()));
}

RPoly rp_mod(const PadicCtx& R, const RPoly& a, const RPoly& b) {
    RPoly q, r;
    rp_divmod(R, a, b, q, r);
    return r;
}

// ---- linear Hensel lifting ------------------------------------------------

// Lifts the factor gbar of Phi (monic mod pi) to G with Phi = G*H mod pi^M.
// The Bezout pair sbar*gbar + tbar*hbar = 1 stays fixed mod pi; the residue
// field is realized as Km via the pullback. Phi over F_q[x], y-coefficients.
struct HenselLift {
    RPoly G, H;
};

HenselLift hensel_lift_factor(const Poly& pi, unsigned M, const RPoly& Phi, const Poly& gbar, const Poly& hbar,
                              const Poly& tbar, const ResiduePullback& pull, const FieldElem& x_img) {
    const auto& Fq = pi.ctx();
    auto pull_rpoly = [&](const Poly& a) {
        RPoly r(a.coeffs().size(), Poly(Fq));
        for (std::size_t i = 0; i < a.coeffs().size(); ++i) r[i] = pull.pull(a.coeffs()[i]);
        return r;
    };
    HenselLift out;
    out.G = pull_rpoly(gbar);
    out.H = pull_rpoly(hbar);
    Poly pik = pi;  // pi^k
    for (unsigned k = 1; k < M; ++k) {
        PadicCtx R;
        R.piM = pik * pi;  // pi^(k+1)
        RPoly e = rp_sub(R, Phi, rp_mul(R, out.G, out.H));
        if (rdeg(e) < 0) {
            pik = pik * pi;
            continue;
        }
        // E = e / pi^k over the residue field, realized in Km[y]
        std::vector<FieldElem> Ec(e.size(), x_img.ctx()->zero());
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i].is_zero()) continue;
            Ec[i] = eval_embedded(divexact(e[i], pik), x_img);
        }
        Poly Ebar(x_img.ctx(), std::move(Ec));
        Poly dGbar = poly_mod(tbar * Ebar, gbar);
        Poly dHbar = divexact(Ebar - hbar * dGbar, gbar);
        RPoly dG = pull_rpoly(dGbar);
        RPoly dH = pull_rpoly(dHbar);
        for (std::size_t i = 0; i < dG.size(); ++i) dG[i] = dG[i] * pik;
        for (std::size_t i = 0; i < dH.size(); ++i) dH[i] = dH[i] * pik;
        out.G = rp_add(R, out.G, dG);
        out.H = rp_add(R, out.H, dH);
        pik = R.piM;
    }
    // final check at full precision
    PadicCtx R;
    R.piM = pik;
    if (rdeg(rp_sub(R, Phi, rp_mul(R, out.G, out.H))) >= 0)
        throw inconsistency_error("hensel_lift_factor: lifted factorization check failed");
    return out;
}

int valuation_in(const Poly& a, const Poly& pi) {  // a nonzero
    Poly w = a;
    int v = 0;
    for (;;) {
        auto [q, r] = divmod(w, pi);
        if (!r.is_zero()) return v;
        w = q;
        ++v;
        if (w.is_zero()) return v;  // exactly divisible chain ended at zero quotient
    }
}

// determinant of an n x n matrix over F_q[x]/(pi^M), division-free subset DP
Poly det_mod(const PadicCtx& R, std::vector<std::vector<Poly>> Mx) {
    std::size_t n = Mx.size();
    const auto& ctx = R.piM.ctx();
    std::vector<Poly> D(1u << n, Poly(ctx));
    D[0] = Poly::constant(ctx, ctx->one());
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::size_t row = static_cast<std::size_t>(__builtin_popcount(mask)) - 1;
        Poly acc(ctx);
        int pos = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!(mask & (1u << j))) continue;
            Poly term = Mx[row][j] * D[mask & ~(1u << j)];
            if (pos % 2 == 0) acc += term;
            else acc -= term;
            ++pos;
        }
        D[mask] = R.reduce(acc);
    }
    return D[(1u << n) - 1];
}

}  // namespace

std::vector<const PrimeIdealRec*> FactorBase::base_primes() const {
    std::vector<const PrimeIdealRec*> out;
    for (std::size_t i = 0; i < primes.size(); ++i)
        if (primes[i].in_factor_base) out.push_back(&primes[i]);
    return out;
}

namespace {

std::vector<PrimeIdealRec> records_for_pi(const CurveParams& params, const Poly& pi, const FieldCtxPtr& Km,
                                          unsigned column_bound, std::uint64_t seed) {
    unsigned m = static_cast<unsigned>(pi.degree());
    FieldElem x_img = Km->zero();
    if (m == 1) {
        x_img = -pi.coeffs()[0];
    } else {
        auto rs = roots(map_coeffs(pi, Km), seed);
        if (rs.empty()) throw inconsistency_error("factor base: pi has no root in F_{q^m}");
        x_img = rs.front();
    }
    FieldElem c = eval_embedded(params.f, x_img);
    std::vector<FieldElem> yc(params.ell + 1, Km->zero());
    yc[0] = -c;
    yc[params.ell] = Km->one();
    std::vector<PrimeIdealRec> out;
    for (auto& [gy, mult] : factor(Poly(Km, std::move(yc)), seed)) {
        if (mult != 1) throw inconsistency_error("factor base: ramification at an unramified prime");
        PrimeIdealRec rec;
        rec.pi = pi;
        rec.pi_degree = m;
        rec.Km = Km;
        rec.x_img = x_img;
        rec.gy = gy;
        rec.res_degree = m * static_cast<unsigned>(gy.degree());
        rec.ramification = 1;
        rec.in_factor_base = rec.res_degree <= column_bound;
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

const std::vector<PrimeIdealRec>& FactorBase::local_records(const Poly& pi) const {
    std::string key = pi.to_string();
    auto it = lazy_.find(key);
    if (it != lazy_.end()) return it->second;
    unsigned m = static_cast<unsigned>(pi.degree());
    auto km = Km_cache_.find(m);
    if (km == Km_cache_.end()) km = Km_cache_.emplace(m, make_extension(params.field, m, seed)).first;
    return lazy_.emplace(key, records_for_pi(params, pi, km->second, degree_bound, seed)).first->second;
}

FactorBase build_factor_base(const CurveParams& params, unsigned degree_bound, std::uint64_t seed,
                             unsigned record_bound) {
    if (degree_bound < 1) throw std::invalid_argument("build_factor_base: degree_bound >= 1 required");
    FactorBase fb;
    fb.params = params;
    fb.degree_bound = degree_bound;
    fb.record_bound = std::max(record_bound, degree_bound);
    fb.seed = seed;
    // the ramified prime (f, y), included regardless of the bound
    {
        PrimeIdealRec rec;
        rec.pi = params.f;
        rec.pi_degree = params.d;
        rec.ramified = true;
        rec.res_degree = params.d;
        rec.ramification = params.ell;
        rec.in_factor_base = true;
        fb.primes.push_back(std::move(rec));
    }
    for (unsigned m = 1; m <= degree_bound; ++m) {
        FieldCtxPtr Km = make_extension(params.field, m, seed);
        fb.Km_cache_[m] = Km;
        MonicIrreducibleRange range(params.field, m);
        while (auto pi = range.next()) {
            if (*pi == params.f) continue;  // already recorded as the ramified prime
            int begin = static_cast<int>(fb.primes.size());
            for (auto& rec : records_for_pi(params, *pi, Km, degree_bound, seed)) fb.primes.push_back(std::move(rec));
            fb.by_pi[pi->to_string()] = {begin, static_cast<int>(fb.primes.size())};
        }
    }
    fb.column.assign(fb.primes.size(), -1);
    int col = 0;
    for (std::size_t i = 0; i < fb.primes.size(); ++i)
        if (fb.primes[i].in_factor_base) fb.column[i] = col++;
    fb.ncols = col;
    fb.ramified_column = fb.column[0];
    return fb;
}

namespace {

// valuation of z at the ramified prime: min over j of ell*v_f(c_j) + j,
// attained uniquely because the j are distinct mod ell.
long ramified_valuation(const CurveParams& params, const std::vector<Poly>& z) {
    long best = -1;
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (z[j].is_zero()) continue;
        long v = static_cast<long>(params.ell) * valuation_in(z[j], params.f) + static_cast<long>(j);
        if (best < 0 || v < best) best = v;
    }
    return best;
}

}  // namespace

namespace {

// per-record valuations of z at the primes above one unramified pi.
// recs: all primes above pi. Returns parallel vector of valuations.
std::vector<long> local_valuations(const CurveParams& params, const Poly& pi, long mult,
                                   const std::vector<const PrimeIdealRec*>& recs, const std::vector<Poly>& z) {
    std::vector<long> vals(recs.size(), 0);
    if (mult == 1) {
        // exactly one prime with v = 1, necessarily with linear gy
        int found = -1;
        for (std::size_t i = 0; i < recs.size(); ++i) {
            const auto& rec = *recs[i];
            if (rec.gy.degree() != 1) continue;
            FieldElem y0 = -rec.gy.coeffs()[0];
            FieldElem acc = rec.Km->zero();
            for (std::size_t j = z.size(); j-- > 0;) {
                acc *= y0;
                if (!z[j].is_zero()) acc += eval_embedded(z[j], rec.x_img);
            }
            if (acc.is_zero()) {
                if (found >= 0) throw inconsistency_error("valuations: multiplicity-one norm in two primes");
                found = static_cast<int>(i);
            }
        }
        if (found < 0) throw inconsistency_error("valuations: norm factor unaccounted");
        vals[found] = 1;
        return vals;
    }
    // general case: Hensel lift each local factor to pi^(mult+1) and read the
    // valuation off the local norm.
    const unsigned M = static_cast<unsigned>(mult) + 1;
    ResiduePullback pull(params.field, recs[0]->Km, recs[0]->x_img, static_cast<unsigned>(pi.degree()));
    PadicCtx R;
    {
        Poly pin = Poly::constant(params.field, params.field->one());
        for (unsigned t = 0; t < M; ++t) pin = pin * pi;
        R.piM = pin;
    }
    RPoly Phi(params.ell + 1, Poly(params.field));
    Phi[0] = R.reduce(-params.f);
    Phi[params.ell] = Poly::constant(params.field, params.field->one());
    long accounted = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& rec = *recs[i];
        Poly cof = Poly::constant(rec.Km, rec.Km->one());
        for (std::size_t i2 = 0; i2 < recs.size(); ++i2)
            if (i2 != i) cof = cof * recs[i2]->gy;
        auto [gcd1, u, v] = poly_ext_gcd(rec.gy, cof);
        (void)u;
        if (gcd1.degree() != 0) throw inconsistency_error("valuations: local factors not coprime");
        HenselLift lift = hensel_lift_factor(pi, M, Phi, rec.gy, cof, v, pull, rec.x_img);
        const RPoly& G = lift.G;
        RPoly zr(z.size(), Poly(params.field));
        for (std::size_t t = 0; t < z.size(); ++t) zr[t] = R.reduce(z[t]);
        zr = rp_mod(R, zr, G);
        const int n = static_cast<int>(rec.gy.degree());
        std::vector<std::vector<Poly>> Mx(n, std::vector<Poly>(n, Poly(params.field)));
        RPoly col = zr;
        col.resize(n, Poly(params.field));
        for (int cidx = 0; cidx < n; ++cidx) {
            for (int ridx = 0; ridx < n; ++ridx) Mx[ridx][cidx] = col[ridx];
            if (cidx + 1 < n) {
                RPoly shifted(n + 1, Poly(params.field));
                for (int t2 = 0; t2 < n; ++t2) shifted[t2 + 1] = col[t2];
                col = rp_mod(R, shifted, G);
                col.resize(n, Poly(params.field));
            }
        }
        Poly dt = det_mod(R, std::move(Mx));
        if (dt.is_zero()) throw inconsistency_error("valuations: local norm vanished at working precision");
        long vr = valuation_in(dt, pi);
        if (vr % n != 0) throw inconsistency_error("valuations: local norm valuation not divisible");
        vals[i] = vr / n;
        accounted += static_cast<long>(n) * vals[i];
    }
    if (accounted != mult) throw inconsistency_error("valuations: local valuations do not sum to the norm");
    return vals;
}

}  // namespace

std::optional<std::map<int, long>> valuations_of(const FactorBase& fb, const std::vector<Poly>& z,
                                                 std::uint64_t seed) {
    return valuations_given_norm(fb, z, resultant_y(fb.params.ell, fb.params.f, z), seed);
}

std::optional<std::map<int, long>> valuations_given_norm(const FactorBase& fb, const std::vector<Poly>& z,
                                                         const Poly& N, std::uint64_t seed) {
    auto r = valuations_one_large(fb, z, N, seed);
    if (!r || !r->large_key.empty()) return std::nullopt;
    return r->cols;
}

std::optional<PartialValuations> valuations_one_large(const FactorBase& fb, const std::vector<Poly>& z,
                                                      const Poly& N, std::uint64_t seed) {
    const CurveParams& params = fb.params;
    if (N.is_zero()) throw inconsistency_error("valuations: vanishing norm");
    PartialValuations out;
    for (auto& [pi, mult] : factor(N, seed)) {
        if (pi == params.f) {
            long v = ramified_valuation(params, z);
            if (v != mult) throw inconsistency_error("valuations: ramified valuation mismatch");
            if (v) out.cols[fb.ramified_column] = v;
            continue;
        }
        if (pi.degree() > static_cast<int>(fb.record_bound)) return std::nullopt;
        std::vector<const PrimeIdealRec*> recs;
        std::vector<int> cols;
        if (pi.degree() <= static_cast<int>(fb.degree_bound)) {
            auto it = fb.by_pi.find(pi.to_string());
            if (it == fb.by_pi.end()) throw inconsistency_error("valuations: missing local data");
            for (int i = it->second.first; i < it->second.second; ++i) {
                recs.push_back(&fb.primes[i]);
                cols.push_back(fb.column[i]);
            }
        } else {
            for (const auto& rec : fb.local_records(pi)) {
                recs.push_back(&rec);
                cols.push_back(-1);
            }
        }
        auto vals = local_valuations(params, pi, mult, recs, z);
        for (std::size_t i = 0; i < recs.size(); ++i) {
            if (vals[i] == 0) continue;
            if (cols[i] >= 0) {
                out.cols[cols[i]] += vals[i];
            } else {
                if (recs[i]->res_degree > fb.record_bound) return std::nullopt;
                if (!out.large_key.empty()) return std::nullopt;  // at most one large prime
                out.large_key = pi.to_string() + "|" + recs[i]->gy.to_string();
                out.large_val = vals[i];
            }
        }
    }
    return out;
}

}  // namespace ellrank
