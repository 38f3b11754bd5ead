#include "ellrank/poly.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "ellrank/errors.hpp"

namespace ellrank {

Poly::Poly(FieldCtxPtr ctx, std::vector<FieldElem> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    for (const auto& c : c_)
        if (c.ctx() != ctx_) throw std::invalid_argument("Poly: coefficient from wrong field");
    normalize();
}

void Poly::normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

FieldElem Poly::coeff(std::size_t i) const {
    if (i < c_.size()) return c_[i];
    return ctx_->zero();
}

FieldElem Poly::leading() const {
    if (c_.empty()) return ctx_->zero();
    return c_.back();
}

Poly Poly::x(const FieldCtxPtr& ctx) { return Poly(ctx, {ctx->zero(), ctx->one()}); }

Poly Poly::constant(const FieldCtxPtr& ctx, const FieldElem& c) { return Poly(ctx, {c}); }

Poly Poly::from_uints(const FieldCtxPtr& ctx, const std::vector<std::uint64_t>& v) {
    std::vector<FieldElem> c;
    c.reserve(v.size());
    for (auto u : v) c.push_back(ctx->from_uint(u));
    return Poly(ctx, std::move(c));
}

Poly Poly::parse(const FieldCtxPtr& ctx, const std::string& s) {
    std::vector<std::uint64_t> v;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) v.push_back(std::stoull(tok));
    return from_uints(ctx, v);
}

std::string Poly::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) os << ',';
        os << ctx_->to_uint(c_[i]);
    }
    if (c_.empty()) os << '0';
    return os.str();
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (ctx_ != o.ctx_) throw std::invalid_argument("Poly: mismatched fields");
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), ctx_->zero());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    normalize();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (ctx_ != o.ctx_) throw std::invalid_argument("Poly: mismatched fields");
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), ctx_->zero());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    normalize();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.ctx() != b.ctx()) throw std::invalid_argument("Poly: mismatched fields");
    if (a.is_zero() || b.is_zero()) return Poly(a.ctx());
    std::vector<FieldElem> r(a.c_.size() + b.c_.size() - 1, a.ctx()->zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(a.ctx(), std::move(r));
}

Poly Poly::operator*(const FieldElem& s) const {
    Poly r = *this;
    for (auto& c : r.c_) c *= s;
    r.normalize();
    return r;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::invalid_argument("divmod: division by zero polynomial");
    if (a.ctx() != b.ctx()) throw std::invalid_argument("divmod: mismatched fields");
    const auto& ctx = a.ctx();
    int db = b.degree();
    if (a.degree() < db) return {Poly(ctx), a};
    FieldElem lc_inv = inv(b.leading());
    std::vector<FieldElem> rem(a.coeffs());
    std::vector<FieldElem> quo(a.degree() - db + 1, ctx->zero());
    for (int i = a.degree(); i >= db; --i) {
        if (rem[i].is_zero()) continue;
        FieldElem c = rem[i] * lc_inv;
        quo[i - db] = c;
        for (int j = 0; j <= db; ++j) rem[i - db + j] -= c * b.coeffs()[j];
    }
    return {Poly(ctx, std::move(quo)), Poly(ctx, std::move(rem))};
}

Poly poly_mod(const Poly& a, const Poly& m) { return divmod(a, m).second; }

Poly divexact(const Poly& a, const Poly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw inconsistency_error("divexact: remainder nonzero");
    return q;
}

Poly make_monic(const Poly& a) {
    if (a.is_zero() || a.is_monic()) return a;
    return a * inv(a.leading());
}

Poly derivative(const Poly& a) {
    if (a.degree() < 1) return Poly(a.ctx());
    std::vector<FieldElem> r;
    r.reserve(a.degree());
    std::uint32_t p = a.ctx()->p();
    for (int i = 1; i <= a.degree(); ++i) {
        FieldElem s = a.ctx()->zero();
        FieldElem ci = a.coeffs()[i];
        for (std::uint32_t k = 0; k < static_cast<std::uint32_t>(i) % p; ++k) s += ci;
        r.push_back(s);
    }
    return Poly(a.ctx(), std::move(r));
}

FieldElem eval(const Poly& a, const FieldElem& x) {
    FieldElem acc = a.ctx()->zero();
    for (std::size_t i = a.coeffs().size(); i-- > 0;) {
        acc *= x;
        acc += a.coeffs()[i];
    }
    return acc;
}

Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.ctx() != b.ctx()) throw std::invalid_argument("poly_gcd: mismatched fields");
    Poly r0 = a, r1 = b;
    while (!r1.is_zero()) {
        Poly r2 = poly_mod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r2);
    }
    return make_monic(r0);
}

std::tuple<Poly, Poly, Poly> poly_ext_gcd(const Poly& a, const Poly& b) {
    const auto& ctx = a.ctx();
    Poly r0 = a, r1 = b;
    Poly u0 = Poly::constant(ctx, ctx->one()), u1(ctx);
    Poly v0(ctx), v1 = Poly::constant(ctx, ctx->one());
    while (!r1.is_zero()) {
        auto [q, r2] = divmod(r0, r1);
        Poly u2 = u0 - q * u1;
        Poly v2 = v0 - q * v1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        u0 = std::move(u1);
        u1 = std::move(u2);
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    if (r0.is_zero()) return {r0, u0, v0};
    FieldElem s = inv(r0.leading());
    return {r0 * s, u0 * s, v0 * s};
}

Poly powmod(const Poly& base, const mpz_class& e, const Poly& m) {
    if (e < 0) throw std::invalid_argument("powmod: negative exponent");
    Poly r = Poly::constant(base.ctx(), base.ctx()->one());
    if (e == 0) return r;
    Poly b = poly_mod(base, m);
    std::size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = 0; i < nbits; ++i) {
        if (mpz_tstbit(e.get_mpz_t(), i)) r = poly_mod(r * b, m);
        if (i + 1 < nbits) b = poly_mod(b * b, m);
    }
    return r;
}

Poly map_coeffs(const Poly& f, const FieldCtxPtr& K) {
    std::vector<FieldElem> c;
    c.reserve(f.coeffs().size());
    for (const auto& ci : f.coeffs()) c.push_back(K->embed(ci));
    return Poly(K, std::move(c));
}

FieldElem eval_embedded(const Poly& f, const FieldElem& x) {
    const auto& K = x.ctx();
    FieldElem acc = K->zero();
    for (std::size_t i = f.coeffs().size(); i-- > 0;) {
        acc *= x;
        acc += K->embed(f.coeffs()[i]);
    }
    return acc;
}

Poly frobenius_coeffwise(const Poly& f, std::uint64_t q) {
    std::vector<FieldElem> c;
    c.reserve(f.coeffs().size());
    for (const auto& ci : f.coeffs()) c.push_back(ci.is_zero() ? ci : frobenius_q(ci, q));
    return Poly(f.ctx(), std::move(c));
}

bool lex_less(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i) {
        const FieldElem& ca = a.coeffs()[i];
        const FieldElem& cb = b.coeffs()[i];
        if (!(ca == cb)) return lex_less(ca, cb);
    }
    return false;
}

namespace {

std::vector<std::uint32_t> prime_factors_u32(std::uint32_t n) {
    std::vector<std::uint32_t> ps;
    for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d) {
        if (n % d == 0) {
            ps.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

// x^(Q^k) mod f by iterating the Q-power map k times.
Poly x_qpow(const Poly& f, unsigned k) {
    const mpz_class& Q = f.ctx()->size();
    Poly u = powmod(Poly::x(f.ctx()), Q, f);
    for (unsigned i = 1; i < k; ++i) u = powmod(u, Q, f);
    return u;
}

}  // namespace

bool is_irreducible(const Poly& f) {
    if (f.degree() < 1) throw std::invalid_argument("is_irreducible: constant input");
    if (f.degree() == 1) return true;
    Poly m = make_monic(f);
    unsigned n = static_cast<unsigned>(m.degree());
    const auto& ctx = m.ctx();
    // gcd(x^(Q^(n/r)) - x, f) = 1 for every prime r | n
    for (std::uint32_t r : prime_factors_u32(n)) {
        Poly h = x_qpow(m, n / r) - Poly::x(ctx);
        if (poly_gcd(h, m).degree() != 0) return false;
    }
    // x^(Q^n) = x mod f
    Poly h = x_qpow(m, n) - Poly::x(ctx);
    return poly_mod(h, m).is_zero();
}

namespace {

Poly random_poly_below(const FieldCtxPtr& ctx, int deg_bound, std::mt19937_64& rng) {
    std::vector<FieldElem> c;
    c.reserve(deg_bound);
    std::uint64_t qm1 = 0;
    mpz_class Q = ctx->size();
    bool small = Q.fits_ulong_p();
    std::uint64_t qu = small ? Q.get_ui() : 0;
    for (int i = 0; i < deg_bound; ++i) {
        if (small) {
            c.push_back(ctx->from_uint(rng() % qu));
        } else {
            std::vector<std::uint32_t> digits(ctx->degree());
            for (auto& d : digits) d = static_cast<std::uint32_t>(rng() % ctx->p());
            c.push_back(ctx->from_coeffs(std::move(digits)));
        }
    }
    (void)qm1;
    return Poly(ctx, std::move(c));
}

// Equal-degree splitting of h (product of distinct monic irreducibles, each of
// degree dd) into its irreducible factors. Cantor-Zassenhaus; seeded; retry
// budget 64*degree before declaring an internal fault.
void equal_degree_split(const Poly& h, unsigned dd, std::mt19937_64& rng, std::vector<Poly>& out) {
    if (static_cast<unsigned>(h.degree()) == dd) {
        out.push_back(make_monic(h));
        return;
    }
    const auto& ctx = h.ctx();
    const std::uint32_t p = ctx->p();
    mpz_class Qdd;
    mpz_pow_ui(Qdd.get_mpz_t(), ctx->size().get_mpz_t(), dd);
    unsigned budget = 64 * static_cast<unsigned>(h.degree());
    for (unsigned attempt = 0; attempt < budget; ++attempt) {
        Poly r = random_poly_below(ctx, h.degree(), rng);
        if (r.degree() < 1) continue;
        Poly g;
        if (p == 2) {
            // absolute trace to F_2 of the residue algebra
            unsigned steps = ctx->degree() * dd;
            Poly t = poly_mod(r, h), acc = t;
            for (unsigned i = 1; i < steps; ++i) {
                t = poly_mod(t * t, h);
                acc += t;
            }
            g = poly_gcd(acc, h);
        } else {
            mpz_class e = (Qdd - 1) / 2;
            Poly s = powmod(r, e, h);
            s -= Poly::constant(ctx, ctx->one());
            g = poly_gcd(s, h);
        }
        if (g.degree() > 0 && g.degree() < h.degree()) {
            equal_degree_split(g, dd, rng, out);
            equal_degree_split(divexact(h, g), dd, rng, out);
            return;
        }
    }
    throw inconsistency_error("equal_degree_split: retry budget exhausted");
}

// p-th root of f = g(x^p): deg g = deg f / p, with coefficient p-th roots.
Poly pth_root_decompress(const Poly& f) {
    const auto& ctx = f.ctx();
    std::uint32_t p = ctx->p();
    mpz_class e;  // p^(m-1): inverse of the p-power map on F_{p^m}
    mpz_ui_pow_ui(e.get_mpz_t(), p, ctx->degree() - 1);
    std::vector<FieldElem> c;
    for (int i = 0; i <= f.degree(); i += p) c.push_back(pow(f.coeffs()[i], e));
    return Poly(ctx, std::move(c));
}

}  // namespace

std::vector<std::pair<Poly, int>> factor(const Poly& f, std::uint64_t seed) {
    if (f.degree() < 1) throw std::invalid_argument("factor: constant input");
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::pair<Poly, int>> result;
    Poly rest = make_monic(f);
    int outer_mult = 1;
    while (rest.degree() > 0) {
        Poly d = derivative(rest);
        if (d.is_zero()) {
            rest = pth_root_decompress(rest);
            outer_mult *= static_cast<int>(rest.ctx()->p());
            continue;
        }
        Poly sqfree = divexact(rest, poly_gcd(rest, d));
        // distinct-degree split of the squarefree part
        Poly w = sqfree;
        Poly u = powmod(Poly::x(f.ctx()), f.ctx()->size(), w);
        std::vector<Poly> irreducibles;
        for (unsigned dd = 1; 2 * dd <= static_cast<unsigned>(w.degree()); ++dd) {
            if (dd > 1) u = powmod(u, f.ctx()->size(), w);
            Poly g = poly_gcd(u - Poly::x(f.ctx()), w);
            if (g.degree() > 0) {
                equal_degree_split(g, dd, rng, irreducibles);
                w = divexact(w, g);
                u = poly_mod(u, w);
            }
        }
        if (w.degree() > 0) irreducibles.push_back(make_monic(w));
        for (const auto& irr : irreducibles) {
            int v = 0;
            for (;;) {
                auto [q, r] = divmod(rest, irr);
                if (!r.is_zero()) break;
                rest = q;
                ++v;
            }
            result.emplace_back(irr, v * outer_mult);
        }
    }
    std::sort(result.begin(), result.end(),
              [](const auto& a, const auto& b) { return lex_less(a.first, b.first); });
    return result;
}

std::vector<FieldElem> roots(const Poly& f, std::uint64_t seed) {
    std::vector<FieldElem> out;
    if (f.degree() < 1) return out;
    for (const auto& [g, m] : factor(f, seed)) {
        (void)m;
        if (g.degree() == 1) out.push_back(-g.coeffs()[0]);
    }
    std::sort(out.begin(), out.end(), [](const FieldElem& a, const FieldElem& b) { return lex_less(a, b); });
    return out;
}

MonicIrreducibleRange::MonicIrreducibleRange(FieldCtxPtr ctx, unsigned d) : ctx_(std::move(ctx)), d_(d) {
    if (d_ < 1) throw std::invalid_argument("MonicIrreducibleRange: d >= 1 required");
    index_ = 0;
    mpz_pow_ui(count_.get_mpz_t(), ctx_->size().get_mpz_t(), d_);
}

std::optional<Poly> MonicIrreducibleRange::next() {
    // index encodes lower coefficients base Q, most significant digit first in
    // the lexicographic order (c_{d-1} is the highest-weight digit).
    while (index_ < count_) {
        mpz_class k = index_;
        ++index_;
        std::vector<FieldElem> c(d_ + 1, ctx_->zero());
        c[d_] = ctx_->one();
        mpz_class Q = ctx_->size();
        for (unsigned i = 0; i < d_; ++i) {
            mpz_class digit = k % Q;
            c[i] = ctx_->from_uint(digit.get_ui());
            k /= Q;
        }
        Poly cand(ctx_, std::move(c));
        if (is_irreducible(cand)) return cand;
    }
    return std::nullopt;
}

namespace {
int mobius(unsigned n) {
    int mu = 1;
    for (unsigned d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}
}  // namespace

mpz_class count_monic_irreducible(const mpz_class& Q, unsigned d) {
    mpz_class total = 0;
    for (unsigned m = 1; m <= d; ++m) {
        if (d % m) continue;
        int mu = mobius(m);
        if (!mu) continue;
        mpz_class term;
        mpz_pow_ui(term.get_mpz_t(), Q.get_mpz_t(), d / m);
        total += mu * term;
    }
    return total / d;
}

Poly resultant_y(std::uint32_t ell, const Poly& f, const std::vector<Poly>& z) {
    const auto& ctx = f.ctx();
    int dz = static_cast<int>(z.size()) - 1;
    while (dz >= 0 && z[dz].is_zero()) --dz;
    if (dz < 0) throw std::invalid_argument("resultant_y: z is identically zero");
    if (dz == 0) {
        // Res(A, const) = const^{deg A}
        Poly r = Poly::constant(ctx, ctx->one());
        for (std::uint32_t i = 0; i < ell; ++i) r = r * z[0];
        return r;
    }
    if (dz == 1) {
        // Res(y^ell - f, c0 + c1 y) = c0^ell + (-1)^(ell+1) c1^ell f
        Poly c0p = Poly::constant(ctx, ctx->one());
        Poly c1p = c0p;
        for (std::uint32_t i = 0; i < ell; ++i) {
            c0p = c0p * z[0];
            c1p = c1p * z[1];
        }
        Poly t = c1p * f;
        return (ell % 2 == 0) ? c0p - t : c0p + t;
    }
    // Sylvester matrix of A = y^ell - f and z, entries in F_q[x]
    int n = static_cast<int>(ell) + dz;
    std::vector<std::vector<Poly>> M(n, std::vector<Poly>(n, Poly(ctx)));
    // A's coefficients in y: [ -f, 0, ..., 0, 1 ]
    for (int r = 0; r < dz; ++r) {
        M[r][r] = Poly::constant(ctx, ctx->one());      // y^ell coefficient
        M[r][r + ell] = -f;                             // constant coefficient
    }
    for (int r = 0; r < static_cast<int>(ell); ++r) {
        for (int j = 0; j <= dz; ++j) M[dz + r][r + j] = z[dz - j];
    }
    // Bareiss fraction-free elimination
    Poly prev = Poly::constant(ctx, ctx->one());
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (M[k][k].is_zero()) {
            int piv = -1;
            for (int r = k + 1; r < n; ++r)
                if (!M[r][k].is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0) return Poly(ctx);  // singular: resultant 0
            std::swap(M[k], M[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Poly num = M[i][j] * M[k][k] - M[i][k] * M[k][j];
                M[i][j] = divexact(num, prev);
            }
            M[i][k] = Poly(ctx);
        }
        prev = M[k][k];
    }
    Poly det = M[n - 1][n - 1];
    if (sign < 0) det = -det;
    return det;
}

}  // namespace ellrank
