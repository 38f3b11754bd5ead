#include "ellrank/gf.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ellrank {

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

PrimePower PrimePower::make(std::uint32_t p, std::uint32_t e) {
    if (!is_prime_u32(p)) throw std::invalid_argument("PrimePower: p is not prime");
    if (e == 0) throw std::invalid_argument("PrimePower: exponent must be positive");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        if (q > UINT64_MAX / p) throw std::invalid_argument("PrimePower: q overflows");
        q *= p;
    }
    return PrimePower{p, e, q};
}

namespace {

// Dense F_p[x] helpers on raw digit vectors (little-endian, may carry trailing
// zeros). Kept local to this TU; the Poly class is the public layer.

using Vec = std::vector<std::uint32_t>;

std::size_t vdeg(const Vec& a) {
    std::size_t n = a.size();
    while (n > 0 && a[n - 1] == 0) --n;
    return n;  // number of significant coefficients; 0 means zero poly
}

Vec vmul(const Vec& a, const Vec& b, std::uint32_t p) {
    std::size_t na = vdeg(a), nb = vdeg(b);
    if (na == 0 || nb == 0) return {};
    Vec r(na + nb - 1, 0);
    for (std::size_t i = 0; i < na; ++i) {
        if (a[i] == 0) continue;
        std::uint64_t ai = a[i];
        for (std::size_t j = 0; j < nb; ++j) {
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + ai * b[j]) % p);
        }
    }
    return r;
}

// a mod m, m monic of degree dm >= 1
void vmod(Vec& a, const Vec& m, std::uint32_t p) {
    std::size_t dm = vdeg(m) - 1;
    std::size_t na = vdeg(a);
    while (na > dm) {
        std::uint64_t lead = a[na - 1];
        std::size_t shift = na - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i) {
            std::uint64_t sub = lead * m[i] % p;
            std::uint64_t cur = a[shift + i];
            a[shift + i] = static_cast<std::uint32_t>((cur + p - sub) % p);
        }
        na = vdeg(a);
    }
    a.resize(dm, 0);
}

Vec vmulmod(const Vec& a, const Vec& b, const Vec& m, std::uint32_t p) {
    Vec r = vmul(a, b, p);
    vmod(r, m, p);
    return r;
}

std::uint32_t inv_mod_p(std::uint32_t x, std::uint32_t p) {
    std::uint64_t r = 1, b = x, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

// rem := a mod b, quo := a div b; b nonzero.
void vdivmod(const Vec& a, const Vec& b, Vec& quo, Vec& rem, std::uint32_t p) {
    std::size_t nb = vdeg(b);
    std::uint32_t lc_inv = inv_mod_p(b[nb - 1], p);
    rem = a;
    quo.assign(vdeg(a) >= nb ? vdeg(a) - nb + 1 : 1, 0);
    while (vdeg(rem) >= nb) {
        std::size_t nr = vdeg(rem);
        std::uint64_t c = static_cast<std::uint64_t>(rem[nr - 1]) * lc_inv % p;
        std::size_t shift = nr - nb;
        quo[shift] = static_cast<std::uint32_t>((quo[shift] + c) % p);
        for (std::size_t i = 0; i < nb; ++i) {
            std::uint64_t sub = c * b[i] % p;
            rem[shift + i] = static_cast<std::uint32_t>((rem[shift + i] + p - sub) % p);
        }
    }
    rem.resize(vdeg(rem));
}

// Extended Euclid in F_p[x]: returns (g, u) with u*a = g mod m, g = gcd(a, m).
std::pair<Vec, Vec> vext_gcd_mod(Vec a, Vec m, std::uint32_t p) {
    Vec r0 = std::move(m), r1 = std::move(a);
    Vec s0 = {}, s1 = {1};
    while (vdeg(r1) != 0) {
        Vec q, rem;
        vdivmod(r0, r1, q, rem, p);
        Vec qs1 = vmul(q, s1, p);
        Vec s2 = s0;
        s2.resize(std::max(s2.size(), qs1.size()), 0);
        for (std::size_t i = 0; i < qs1.size(); ++i) s2[i] = (s2[i] + p - qs1[i]) % p;
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    return {std::move(r0), std::move(s0)};
}

}  // namespace

FieldElem::FieldElem(FieldCtxPtr ctx, std::vector<std::uint32_t> coeffs)
    : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    if (c_.size() != ctx_->degree()) throw std::invalid_argument("FieldElem: bad coefficient length");
    for (auto& d : c_)
        if (d >= ctx_->p()) throw std::invalid_argument("FieldElem: digit out of range");
}

bool FieldElem::is_zero() const {
    for (auto d : c_)
        if (d) return false;
    return true;
}

bool FieldElem::is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i]) return false;
    return true;
}

std::string FieldElem::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) os << ',';
        os << c_[i];
    }
    return os.str();
}

bool operator==(const FieldElem& a, const FieldElem& b) {
    return a.ctx_ == b.ctx_ && a.c_ == b.c_;
}

bool lex_less(const FieldElem& a, const FieldElem& b) {
    for (std::size_t i = a.c_.size(); i-- > 0;) {
        if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    }
    return false;
}

FieldElem FieldElem::operator-() const {
    FieldElem r = *this;
    std::uint32_t p = ctx_->p();
    for (auto& d : r.c_) d = d ? p - d : 0;
    return r;
}

FieldElem& FieldElem::operator+=(const FieldElem& o) {
    if (ctx_ != o.ctx_) throw std::invalid_argument("FieldElem: mismatched fields");
    std::uint32_t p = ctx_->p();
    for (std::size_t i = 0; i < c_.size(); ++i) {
        c_[i] += o.c_[i];
        if (c_[i] >= p) c_[i] -= p;
    }
    return *this;
}

FieldElem& FieldElem::operator-=(const FieldElem& o) {
    if (ctx_ != o.ctx_) throw std::invalid_argument("FieldElem: mismatched fields");
    std::uint32_t p = ctx_->p();
    for (std::size_t i = 0; i < c_.size(); ++i) {
        c_[i] = (c_[i] + p - o.c_[i]) % p;
    }
    return *this;
}

FieldElem& FieldElem::operator*=(const FieldElem& o) {
    if (ctx_ != o.ctx_) throw std::invalid_argument("FieldElem: mismatched fields");
    c_ = vmulmod(c_, o.c_, ctx_->modulus(), ctx_->p());
    return *this;
}

FieldElem FieldCtx::zero() const {
    FieldElem e;
    e.ctx_ = shared_from_this();
    e.c_.assign(m_, 0);
    return e;
}

FieldElem FieldCtx::one() const { return from_uint(1); }

FieldElem FieldCtx::gen() const {
    if (m_ == 1) {
        // class of x in F_p[x]/(x - c) is the scalar c
        std::uint32_t c = (p_ - mod_[0]) % p_;
        return from_uint(c);
    }
    FieldElem e = zero();
    e.c_[1] = 1;
    return e;
}

FieldElem FieldCtx::from_coeffs(std::vector<std::uint32_t> coeffs) const {
    return FieldElem(shared_from_this(), std::move(coeffs));
}

FieldElem FieldCtx::from_uint(std::uint64_t v) const {
    FieldElem e;
    e.ctx_ = shared_from_this();
    e.c_.assign(m_, 0);
    for (std::uint32_t i = 0; i < m_ && v; ++i) {
        e.c_[i] = static_cast<std::uint32_t>(v % p_);
        v /= p_;
    }
    if (v) throw std::invalid_argument("FieldCtx::from_uint: value exceeds field size");
    return e;
}

std::uint64_t FieldCtx::to_uint(const FieldElem& a) const {
    std::uint64_t v = 0;
    for (std::size_t i = a.coeffs().size(); i-- > 0;) v = v * p_ + a.coeffs()[i];
    return v;
}

FieldElem FieldCtx::from_string(const std::string& s) const {
    std::vector<std::uint32_t> c;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) c.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    c.resize(m_, 0);
    return from_coeffs(std::move(c));
}

FieldElem FieldCtx::embed(const FieldElem& a) const {
    if (a.ctx().get() == this) return a;
    if (!parent_) throw std::invalid_argument("FieldCtx::embed: element not from an ancestor field");
    FieldElem src = (a.ctx() == parent_) ? a : parent_->embed(a);
    // Horner at the parent generator image; coefficients of src are F_p scalars.
    FieldElem acc = zero();
    for (std::size_t i = src.coeffs().size(); i-- > 0;) {
        acc *= parent_gen_img_;
        acc += from_uint(src.coeffs()[i]);
    }
    return acc;
}

FieldCtxPtr FieldCtx::prime_field(std::uint32_t p) {
    if (!is_prime_u32(p)) throw std::invalid_argument("prime_field: p is not prime");
    return make_field_raw(p, {0, 1});
}

FieldCtxPtr make_field_raw(std::uint32_t p, std::vector<std::uint32_t> modulus) {
    auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
    ctx->p_ = p;
    ctx->m_ = static_cast<std::uint32_t>(modulus.size() - 1);
    if (ctx->m_ < 1 || modulus.back() != 1) throw std::invalid_argument("make_field_raw: modulus must be monic of degree >= 1");
    ctx->mod_ = std::move(modulus);
    mpz_ui_pow_ui(ctx->size_.get_mpz_t(), p, ctx->m_);
    return ctx;
}

FieldElem inv(const FieldElem& a) {
    if (a.is_zero()) throw std::invalid_argument("inv: zero element");
    const auto& ctx = a.ctx();
    auto [g, u] = vext_gcd_mod(a.coeffs(), ctx->modulus(), ctx->p());
    // g is a nonzero constant since the modulus is irreducible
    std::uint64_t c = g[0], p = ctx->p();
    std::uint64_t cinv = 1, b = c, e = p - 2;
    while (e) {
        if (e & 1) cinv = cinv * b % p;
        b = b * b % p;
        e >>= 1;
    }
    u.resize(ctx->degree(), 0);
    for (auto& d : u) d = static_cast<std::uint32_t>(d * cinv % p);
    return ctx->from_coeffs(std::move(u));
}

FieldElem pow(const FieldElem& a, const mpz_class& e) {
    if (e < 0) throw std::invalid_argument("pow: negative exponent");
    FieldElem r = a.ctx()->one();
    FieldElem b = a;
    mpz_class k = e;
    std::size_t nbits = mpz_sizeinbase(k.get_mpz_t(), 2);
    if (k == 0) return r;
    for (std::size_t i = 0; i < nbits; ++i) {
        if (mpz_tstbit(k.get_mpz_t(), i)) r *= b;
        if (i + 1 < nbits) b *= b;
    }
    return r;
}

FieldElem pow(const FieldElem& a, std::uint64_t e) { return pow(a, mpz_class(static_cast<unsigned long>(e))); }

FieldElem frobenius_q(const FieldElem& x, std::uint64_t q) {
    std::uint32_t p = x.ctx()->p();
    std::uint64_t v = q;
    std::uint32_t j = 0;
    while (v > 1) {
        if (v % p) throw std::invalid_argument("frobenius_q: q is not a power of the characteristic");
        v /= p;
        ++j;
    }
    if (q == 0 || (j == 0 && q != 1)) throw std::invalid_argument("frobenius_q: bad q");
    if (j == 0 || x.ctx()->degree() % j != 0)
        throw std::invalid_argument("frobenius_q: q is not the size of a subfield");
    return pow(x, mpz_class(static_cast<unsigned long>(q)));
}

bool is_lth_power(const FieldElem& x, std::uint32_t ell) {
    if (x.is_zero()) throw std::invalid_argument("is_lth_power: zero element");
    mpz_class n = x.ctx()->size() - 1;
    if (!mpz_divisible_ui_p(n.get_mpz_t(), ell)) return true;
    mpz_class e = n / ell;
    return pow(x, e).is_one();
}

namespace rawgf {

void mul_into(const FieldCtx& F, const Vec& a, const Vec& b, Vec& out, Vec& scratch) {
    const std::uint32_t p = F.p();
    const std::size_t m = F.degree();
    scratch.assign(2 * m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i] == 0) continue;
        std::uint64_t ai = a[i];
        for (std::size_t j = 0; j < m; ++j) {
            scratch[i + j] = static_cast<std::uint32_t>((scratch[i + j] + ai * b[j]) % p);
        }
    }
    const Vec& mod = F.modulus();
    for (std::size_t k = 2 * m; k-- > m;) {
        std::uint64_t lead = scratch[k];
        if (!lead) continue;
        scratch[k] = 0;
        std::size_t shift = k - m;
        for (std::size_t i = 0; i < m; ++i) {
            std::uint64_t sub = lead * mod[i] % p;
            scratch[shift + i] = static_cast<std::uint32_t>((scratch[shift + i] + p - sub) % p);
        }
    }
    out.assign(scratch.begin(), scratch.begin() + m);
}

void add_into(const FieldCtx& F, const Vec& a, const Vec& b, Vec& out) {
    const std::uint32_t p = F.p();
    out.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint32_t s = a[i] + b[i];
        out[i] = s >= p ? s - p : s;
    }
}

bool is_zero(const Vec& a) {
    for (auto d : a)
        if (d) return false;
    return true;
}

bool inc(Vec& a, std::uint32_t p) {
    for (auto& d : a) {
        if (++d < p) return true;
        d = 0;
    }
    return false;
}

std::uint64_t key_of(const FieldCtx& F, const Vec& a) {
    std::uint64_t v = 0;
    for (std::size_t i = a.size(); i-- > 0;) v = v * F.p() + a[i];
    return v;
}

}  // namespace rawgf

std::uint32_t order_mod(std::uint64_t q, std::uint32_t ell) {
    if (q % ell == 0) throw std::invalid_argument("order_mod: ell divides q");
    std::uint64_t r = q % ell;
    std::uint32_t g = 1;
    std::uint64_t acc = r;
    while (acc != 1) {
        acc = acc * r % ell;
        ++g;
        if (g > ell) throw std::logic_error("order_mod: no order found (ell not prime?)");
    }
    return g;
}

}  // namespace ellrank
