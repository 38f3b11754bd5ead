#include <algorithm>
#include <cstdint>

#include "ellrank/cyclotomic.hpp"
#include "ellrank/errors.hpp"
#include "ellrank/oracle.hpp"

namespace ellrank {

mpz_class LPoly::class_number() const {
    mpz_class h = 0;
    for (const auto& c : a) h += c;
    return h;
}

mpz_class LPoly::point_count(unsigned i) const {
    // p_k: power sums of the inverse roots; sum_{t=0}^{min(k-1,2g)} a_t p_{k-t}
    // + [k <= 2g] k a_k = 0.
    std::vector<mpz_class> p(i + 1, 0);
    for (unsigned k = 1; k <= i; ++k) {
        mpz_class s = 0;
        for (unsigned t = 1; t < k; ++t) {
            if (k - t < 1) break;
            if (t <= 2 * genus) s += a[t] * p[k - t];
        }
        if (k <= 2 * genus) s += k * a[k];
        p[k] = -s;
    }
    mpz_class qi;
    mpz_ui_pow_ui(qi.get_mpz_t(), static_cast<unsigned long>(q), i);
    return qi + 1 - p[i];
}

void LPoly::check_self_consistency() const {
    if (a.size() != 2 * genus + 1 || a[0] != 1)
        throw inconsistency_error("LPoly: malformed coefficient vector");
    for (unsigned i = 0; i <= genus; ++i) {
        mpz_class qpow;
        mpz_ui_pow_ui(qpow.get_mpz_t(), static_cast<unsigned long>(q), genus - i);
        if (a[2 * genus - i] != qpow * a[i])
            throw inconsistency_error("LPoly: functional equation violated");
    }
    // |a_1| = |N_1 - q - 1| <= 2g sqrt(q)
    if (a[1] * a[1] > mpz_class(4) * genus * genus * static_cast<unsigned long>(q))
        throw inconsistency_error("LPoly: Weil bound violated on a_1");
    if (class_number() <= 0) throw inconsistency_error("LPoly: L(1) <= 0");
}

namespace {

using rawgf::Vec;

std::vector<std::uint64_t> prime_factors_u64(std::uint64_t n) {
    std::vector<std::uint64_t> ps;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            ps.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

Vec raw_pow(const FieldCtx& F, Vec base, std::uint64_t e) {
    Vec r(F.degree(), 0);
    r[0] = 1;
    Vec scratch;
    while (e) {
        if (e & 1) rawgf::mul_into(F, r, base, r, scratch);
        e >>= 1;
        if (e) rawgf::mul_into(F, base, base, base, scratch);
    }
    return r;
}

bool raw_is_one(const Vec& a) {
    if (a.empty() || a[0] != 1) return false;
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i]) return false;
    return true;
}

// cls[key(u)] = dlog(u) mod ell w.r.t. the returned generator, for all u != 0.
struct ModEllIndex {
    std::vector<std::uint8_t> cls;
    Vec gen;
};

ModEllIndex build_index_table(const FieldCtx& F, std::uint32_t ell) {
    std::uint64_t Q = F.size().get_ui();
    auto rs = prime_factors_u64(Q - 1);
    ModEllIndex idx;
    // deterministic generator: first element (in counting order) of full order
    Vec cand(F.degree(), 0);
    for (std::uint64_t v = 1; v < Q; ++v) {
        Vec u(F.degree(), 0);
        std::uint64_t t = v;
        for (std::size_t i = 0; i < F.degree() && t; ++i) {
            u[i] = static_cast<std::uint32_t>(t % F.p());
            t /= F.p();
        }
        bool ok = true;
        for (auto r : rs) {
            if (raw_is_one(raw_pow(F, u, (Q - 1) / r))) {
                ok = false;
                break;
            }
        }
        if (ok) {
            cand = u;
            break;
        }
    }
    if (rawgf::is_zero(cand)) throw inconsistency_error("build_index_table: no generator found");
    idx.gen = cand;
    idx.cls.assign(Q, 0);
    Vec acc(F.degree(), 0);
    acc[0] = 1;
    Vec scratch;
    for (std::uint64_t t = 0; t + 1 < Q; ++t) {
        idx.cls[rawgf::key_of(F, acc)] = static_cast<std::uint8_t>(t % ell);
        rawgf::mul_into(F, acc, idx.gen, acc, scratch);
    }
    if (!raw_is_one(acc)) throw inconsistency_error("build_index_table: generator order mismatch");
    return idx;
}

std::vector<Vec> embedded_coeffs(const Poly& f, const FieldCtxPtr& K) {
    std::vector<Vec> out;
    out.reserve(f.coeffs().size());
    for (const auto& c : f.coeffs()) out.push_back(K->embed(c).coeffs());
    return out;
}

void horner_eval(const FieldCtx& F, const std::vector<Vec>& coeffs, const Vec& x, Vec& out, Vec& scratch) {
    out.assign(F.degree(), 0);
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        rawgf::mul_into(F, out, x, out, scratch);
        rawgf::add_into(F, out, coeffs[i], out);
    }
}

// counts[t] = #{x in K : ind(f(x)) = t mod ell}, plus the f-root count.
// ind is the discrete log mod ell w.r.t. the table generator.
struct CharCounts {
    std::vector<std::uint64_t> counts;  // size ell
    std::uint64_t roots = 0;
    Vec gen;
};

CharCounts char_sum_counts(const FieldCtxPtr& K, const Poly& f, std::uint32_t ell) {
    CharCounts out;
    out.counts.assign(ell, 0);
    ModEllIndex idx = build_index_table(*K, ell);
    out.gen = idx.gen;
    auto coeffs = embedded_coeffs(f, K);
    Vec x(K->degree(), 0), v, scratch;
    for (;;) {
        horner_eval(*K, coeffs, x, v, scratch);
        if (rawgf::is_zero(v)) ++out.roots;
        else ++out.counts[idx.cls[rawgf::key_of(*K, v)]];
        if (!rawgf::inc(x, K->p())) break;
    }
    return out;
}

bool fits_budget(const mpz_class& sz, std::uint64_t budget) {
    return sz.fits_ulong_p() && sz.get_ui() <= budget;
}

mpz_class q_pow(std::uint64_t q, unsigned i) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(q), i);
    return r;
}

LPoly finish_from_low_coeffs(const CurveParams& params, std::vector<mpz_class> a) {
    unsigned g = static_cast<unsigned>(params.genus);
    a.resize(2 * g + 1, 0);
    for (unsigned i = 0; i < g; ++i) a[2 * g - i] = q_pow(params.q.q, g - i) * a[i];
    LPoly L;
    L.genus = g;
    L.q = params.q.q;
    L.a = std::move(a);
    L.check_self_consistency();
    return L;
}

LPoly l_poly_by_counting(const CurveParams& params, std::uint64_t seed, std::uint64_t budget) {
    unsigned g = static_cast<unsigned>(params.genus);
    std::vector<mpz_class> p(g + 1, 0), a(g + 1, 0);
    a[0] = 1;
    for (unsigned k = 1; k <= g; ++k) {
        p[k] = q_pow(params.q.q, k) + 1 - count_points(params, k, budget, seed);
        mpz_class s = 0;
        for (unsigned i = 1; i <= k; ++i) s += p[i] * a[k - i];
        mpz_class ak, rem;
        mpz_fdiv_qr(ak.get_mpz_t(), rem.get_mpz_t(), mpz_class(-s).get_mpz_t(), mpz_class(k).get_mpz_t());
        if (rem != 0) throw inconsistency_error("l_polynomial: Newton recursion not integral");
        a[k] = ak;
    }
    return finish_from_low_coeffs(params, std::move(a));
}

// --- character-sum route -------------------------------------------------

// Newton's identities over Z[zeta]: from power sums P_1..P_K of the inverse
// roots to coefficients lambda_0..lambda_K.
std::vector<CycInt> newton_coeffs(std::uint32_t ell, const std::vector<CycInt>& P, unsigned K) {
    std::vector<CycInt> e(K + 1, CycInt(ell));
    e[0] = CycInt(ell, 1);
    for (unsigned m = 1; m <= K; ++m) {
        CycInt s(ell);
        int sign = 1;
        for (unsigned i = 1; i <= m; ++i) {
            CycInt term = e[m - i] * P[i];
            if (sign > 0) s += term;
            else s -= term;
            sign = -sign;
        }
        e[m] = s.divide_exact(m);
    }
    std::vector<CycInt> lambda(K + 1, CycInt(ell));
    for (unsigned m = 0; m <= K; ++m) lambda[m] = (m % 2 == 0) ? e[m] : CycInt(ell) - e[m];
    return lambda;
}

LPoly l_poly_by_characters(const CurveParams& params, std::uint64_t seed, std::uint64_t budget) {
    const std::uint32_t ell = params.ell;
    const std::uint32_t gamma = params.gamma;
    const unsigned D = params.d - 1;
    if (D == 0) return finish_from_low_coeffs(params, {mpz_class(1)});
    FieldCtxPtr big = make_extension(params.field, gamma, seed);
    mpz_class Q = big->size();

    unsigned K = (D + 1) / 2;
    if (2 * K < D) ++K;  // window [D-K, K] nonempty
    auto sum_feasible = [&](unsigned KK) {
        mpz_class tot = 0, Qk = 1;
        for (unsigned k = 1; k <= KK; ++k) {
            Qk *= Q;
            tot += Qk;
        }
        return fits_budget(tot, budget);
    };
    if (!sum_feasible(K))
        throw resource_limit_error("l_polynomial: character sums exceed the enumeration budget");

    // primitive ell-th root in big, first one in counting order
    FieldElem w = big->zero();
    {
        mpz_class e = (Q - 1) / ell;
        for (std::uint64_t v = 2;; ++v) {
            FieldElem z = pow(big->from_uint(v), e);
            if (!z.is_one()) {
                w = z;
                break;
            }
        }
    }

    // Galois orbits of nontrivial characters under j -> qj mod ell
    std::vector<int> orbit_of(ell, -1);
    std::vector<std::uint32_t> reps;
    for (std::uint32_t j = 1; j < ell; ++j) {
        if (orbit_of[j] >= 0) continue;
        reps.push_back(j);
        std::uint64_t t = j;
        while (orbit_of[t] < 0) {
            orbit_of[t] = static_cast<int>(reps.size()) - 1;
            t = t * (params.q.q % ell) % ell;
        }
    }
    if (reps.size() != (ell - 1) / gamma)
        throw inconsistency_error("l_polynomial: unexpected character orbit count");

    // S[k][j] for k = 1..K (acquired lazily as K escalates)
    std::vector<std::vector<CycInt>> S(1);  // S[0] unused
    auto compute_sums_for = [&](unsigned k) {
        FieldCtxPtr Kk = make_extension(big, k, seed);
        CharCounts cc = char_sum_counts(Kk, params.f, ell);
        // reference the same root w in every layer: g^((Q^k-1)/ell) = embed(w)^c
        mpz_class e = (Kk->size() - 1) / ell;
        FieldElem W0 = pow(Kk->from_coeffs(cc.gen), e);
        FieldElem wE = Kk->embed(w);
        std::uint32_t c = 0;
        FieldElem acc = Kk->one();
        for (std::uint32_t t = 1; t < ell; ++t) {
            acc *= wE;
            if (acc == W0) {
                c = t;
                break;
            }
        }
        if (c == 0) throw inconsistency_error("l_polynomial: root-of-unity mismatch across layers");
        std::vector<CycInt> row(ell, CycInt(ell));
        for (std::uint32_t j = 1; j < ell; ++j) {
            CycInt s(ell);
            for (std::uint32_t t = 0; t < ell; ++t) {
                std::uint32_t ind = static_cast<std::uint32_t>(static_cast<std::uint64_t>(c) * t % ell);
                s += CycInt::zeta_pow(ell, j * ind % ell) * mpz_class(cc.counts[t]);
            }
            row[j] = s;
        }
        return row;
    };
    for (unsigned k = 1; k <= K; ++k) S.push_back(compute_sums_for(k));

    // Per orbit representative: lambda_0..lambda_K, then the functional
    // equation lambda_{D-m} = (-1)^D W Q^{-m} sigma_{-1}(lambda_m).
    const unsigned reps_n = static_cast<unsigned>(reps.size());
    std::vector<std::vector<CycInt>> lambdas(reps_n);
    for (unsigned ri = 0; ri < reps_n; ++ri) {
        std::uint32_t j = reps[ri];
        for (;;) {
            unsigned KK = static_cast<unsigned>(S.size()) - 1;
            std::vector<CycInt> P(KK + 1, CycInt(ell));
            for (unsigned k = 1; k <= KK; ++k) P[k] = CycInt(ell) - S[k][j];
            std::vector<CycInt> lam = newton_coeffs(ell, P, std::min(KK, D));
            if (KK >= D) {
                lambdas[ri] = std::move(lam);
                break;
            }
            // recover W from a window pair
            bool got = false;
            CycInt W(ell);
            for (unsigned m = D - KK; m <= KK && !got; ++m) {
                CycInt u = lam[m].conj();
                if (u.is_zero()) continue;
                mpz_class Nu = u.norm();
                CycInt num = lam[D - m] * u.adjugate();
                mpz_class Qm = 1;
                for (unsigned t = 0; t < m; ++t) Qm *= Q;
                num = num * Qm;
                if (D % 2) num = CycInt(ell) - num;
                W = num.divide_exact(Nu);
                got = true;
            }
            if (got) {
                // |W|^2 = Q^D exactly
                mpz_class QD = 1;
                for (unsigned t = 0; t < D; ++t) QD *= Q;
                mpz_class wnorm;
                if (!(W * W.conj()).rational_value(&wnorm) || wnorm != QD)
                    throw inconsistency_error("l_polynomial: root-number modulus check failed");
                lam.resize(D + 1, CycInt(ell));
                for (unsigned m = 0; m + KK < D; ++m) {  // fill indices D-m > KK
                    mpz_class Qm = 1;
                    for (unsigned t = 0; t < m; ++t) Qm *= Q;
                    CycInt v = W * lam[m].conj();
                    if (D % 2) v = CycInt(ell) - v;
                    lam[D - m] = v.divide_exact(Qm);
                }
                // cross-check every overlapping pair
                for (unsigned m = 0; m <= D; ++m) {
                    unsigned mm = D - m;
                    if (mm > D) continue;
                    mpz_class Qm = 1;
                    for (unsigned t = 0; t < m; ++t) Qm *= Q;
                    CycInt lhs = lam[mm] * Qm;
                    CycInt rhs = W * lam[m].conj();
                    if (D % 2) rhs = CycInt(ell) - rhs;
                    if (!(lhs == rhs))
                        throw inconsistency_error("l_polynomial: functional equation cross-check failed");
                }
                lambdas[ri] = std::move(lam);
                break;
            }
            // every window coefficient vanished; acquire one more sum layer
            if (!sum_feasible(KK + 1))
                throw resource_limit_error("l_polynomial: cannot resolve the root number within budget");
            S.push_back(compute_sums_for(KK + 1));
        }
    }

    // P(s) = prod over orbit representatives; integer coefficients.
    std::vector<CycInt> prod{CycInt(ell, 1)};
    for (unsigned ri = 0; ri < reps_n; ++ri) {
        std::vector<CycInt> next(prod.size() + D, CycInt(ell));
        for (std::size_t i = 0; i < prod.size(); ++i)
            for (unsigned mj = 0; mj <= D; ++mj) next[i + mj] += prod[i] * lambdas[ri][mj];
        prod = std::move(next);
    }
    unsigned degP = static_cast<unsigned>(prod.size()) - 1;
    if (degP * gamma != 2 * params.genus)
        throw inconsistency_error("l_polynomial: character product has wrong degree");
    std::vector<mpz_class> a(2 * params.genus + 1, 0);
    for (unsigned i = 0; i <= degP; ++i) {
        mpz_class v;
        if (!prod[i].rational_value(&v))
            throw inconsistency_error("l_polynomial: character product not rational");
        a[i * gamma] = v;
    }
    LPoly L;
    L.genus = static_cast<unsigned>(params.genus);
    L.q = params.q.q;
    L.a = std::move(a);
    L.check_self_consistency();
    // spot checks against direct enumeration
    verify_lpoly(params, L, 1ull << 14, seed);
    return L;
}

}  // namespace

mpz_class count_points(const CurveParams& params, unsigned i, std::uint64_t budget, std::uint64_t seed) {
    if (i < 1) throw std::invalid_argument("count_points: i >= 1 required");
    mpz_class Qi = q_pow(params.q.q, i);
    bool multiple_of_gamma = (i % params.gamma) == 0;
    if (!fits_budget(Qi, budget)) {
        // y -> y^ell is a bijection when ell does not divide q^i - 1, so every
        // x contributes exactly one point.
        if (!multiple_of_gamma) return Qi + 1;
        throw resource_limit_error("count_points: q^i exceeds the enumeration budget");
    }
    FieldCtxPtr K = make_extension(params.field, i, seed);
    mpz_class N = 1;  // the unique infinite point
    if (!multiple_of_gamma) {
        // every x contributes exactly 1 (including roots of f)
        return N + Qi;
    }
    ModEllIndex idx = build_index_table(*K, params.ell);
    auto coeffs = embedded_coeffs(params.f, K);
    Vec x(K->degree(), 0), v, scratch;
    std::uint64_t affine = 0;
    for (;;) {
        horner_eval(*K, coeffs, x, v, scratch);
        if (rawgf::is_zero(v)) affine += 1;
        else if (idx.cls[rawgf::key_of(*K, v)] == 0) affine += params.ell;
        if (!rawgf::inc(x, K->p())) break;
    }
    return N + affine;
}

LPoly l_polynomial(const CurveParams& params, std::uint64_t seed, std::uint64_t budget) {
    if (params.d < 2) return finish_from_low_coeffs(params, {mpz_class(1)});
    bool routeA = true;
    for (unsigned k = 1; k <= params.genus; ++k) {
        if (k % params.gamma == 0 && !fits_budget(q_pow(params.q.q, k), budget)) {
            routeA = false;
            break;
        }
    }
    if (routeA) return l_poly_by_counting(params, seed, budget);
    return l_poly_by_characters(params, seed, budget);
}

LPoly l_polynomial_via_counting(const CurveParams& params, std::uint64_t seed, std::uint64_t budget) {
    if (params.d < 2) return finish_from_low_coeffs(params, {mpz_class(1)});
    return l_poly_by_counting(params, seed, budget);
}

LPoly l_polynomial_via_characters(const CurveParams& params, std::uint64_t seed, std::uint64_t budget) {
    if (params.d < 2) return finish_from_low_coeffs(params, {mpz_class(1)});
    return l_poly_by_characters(params, seed, budget);
}

void verify_lpoly(const CurveParams& params, const LPoly& L, std::uint64_t spot_budget, std::uint64_t seed) {
    L.check_self_consistency();
    if (L.genus != params.genus || L.q != params.q.q)
        throw inconsistency_error("verify_lpoly: wrong curve parameters");
    for (unsigned i = 1; i <= L.genus + 1; ++i) {
        mpz_class direct;
        try {
            direct = count_points(params, i, spot_budget, seed);
        } catch (const resource_limit_error&) {
            continue;
        }
        if (direct != L.point_count(i)) throw inconsistency_error("verify_lpoly: N_i spot check failed");
    }
}

}  // namespace ellrank
