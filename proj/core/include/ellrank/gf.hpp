#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ellrank {

// q = p^e with p prime, checked by trial division at construction (p < 2^31).
struct PrimePower {
    std::uint32_t p = 0;
    std::uint32_t e = 0;
    std::uint64_t q = 0;

    static PrimePower make(std::uint32_t p, std::uint32_t e);
};

bool is_prime_u32(std::uint32_t n);

class FieldCtx;
using FieldCtxPtr = std::shared_ptr<const FieldCtx>;

// Element of F_{p^m}: coefficient vector over F_p, little-endian in powers of
// the field generator, always of length ctx->degree() with entries < p.
class FieldElem {
  public:
    FieldElem() = default;
    FieldElem(FieldCtxPtr ctx, std::vector<std::uint32_t> coeffs);

    const FieldCtxPtr& ctx() const { return ctx_; }
    const std::vector<std::uint32_t>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_one() const;

    // "1,0,1" means 1 + g^2.
    std::string to_string() const;

    friend bool operator==(const FieldElem& a, const FieldElem& b);
    friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }
    // Lexicographic, most-significant coefficient first; used for canonical choices.
    friend bool lex_less(const FieldElem& a, const FieldElem& b);

    FieldElem operator-() const;
    FieldElem& operator+=(const FieldElem& o);
    FieldElem& operator-=(const FieldElem& o);
    FieldElem& operator*=(const FieldElem& o);
    friend FieldElem operator+(FieldElem a, const FieldElem& b) { return a += b; }
    friend FieldElem operator-(FieldElem a, const FieldElem& b) { return a -= b; }
    friend FieldElem operator*(FieldElem a, const FieldElem& b) { return a *= b; }

  private:
    FieldCtxPtr ctx_;
    std::vector<std::uint32_t> c_;
    friend class FieldCtx;
};

// A finite field F_{p^m} with explicit monic irreducible modulus over F_p.
// Towers carry a handle to the subfield they were built over and the image of
// that subfield's generator, which defines the embedding. Immutable after
// construction; safe to share across threads.
class FieldCtx : public std::enable_shared_from_this<FieldCtx> {
  public:
    std::uint32_t p() const { return p_; }
    std::uint32_t degree() const { return m_; }
    // Modulus coefficients, little-endian, length m+1, leading 1.
    const std::vector<std::uint32_t>& modulus() const { return mod_; }
    const mpz_class& size() const { return size_; }

    const FieldCtxPtr& parent() const { return parent_; }
    // Image of the parent field's generator in this field (null parent: unset).
    const FieldElem& parent_gen_image() const { return parent_gen_img_; }

    FieldElem zero() const;
    FieldElem one() const;
    FieldElem gen() const;  // class of x mod modulus
    FieldElem from_coeffs(std::vector<std::uint32_t> coeffs) const;
    // Base-p digits of v, little-endian: v = sum digit_i p^i. Requires v < p^m.
    FieldElem from_uint(std::uint64_t v) const;
    std::uint64_t to_uint(const FieldElem& a) const;  // inverse of from_uint
    FieldElem from_string(const std::string& s) const;

    // Maps an element of parent() (or of any ancestor) into this field.
    // Field homomorphism fixing F_p.
    FieldElem embed(const FieldElem& a) const;

    static FieldCtxPtr prime_field(std::uint32_t p);

  private:
    FieldCtx() = default;
    std::uint32_t p_ = 0;
    std::uint32_t m_ = 0;
    std::vector<std::uint32_t> mod_;
    mpz_class size_;
    FieldCtxPtr parent_;
    FieldElem parent_gen_img_;

    friend FieldCtxPtr make_extension(const FieldCtxPtr&, unsigned, std::uint64_t);
    friend FieldCtxPtr make_field_raw(std::uint32_t, std::vector<std::uint32_t>);
};

// Degree-m extension of base with a stored embedding; modulus found by a
// seeded deterministic search, so contexts are reproducible across runs.
FieldCtxPtr make_extension(const FieldCtxPtr& base, unsigned m, std::uint64_t seed);

// Field from an explicit monic irreducible modulus over F_p (not checked).
FieldCtxPtr make_field_raw(std::uint32_t p, std::vector<std::uint32_t> modulus);

FieldElem inv(const FieldElem& a);
FieldElem pow(const FieldElem& a, const mpz_class& e);  // e >= 0
FieldElem pow(const FieldElem& a, std::uint64_t e);

// x^q where q is the size of a subfield of x's field; fixes exactly F_q.
FieldElem frobenius_q(const FieldElem& x, std::uint64_t q);

// Reduced-representation kernels for enumeration-heavy loops. Vectors are
// length ctx.degree(), entries < p.
namespace rawgf {
using Vec = std::vector<std::uint32_t>;
void mul_into(const FieldCtx& F, const Vec& a, const Vec& b, Vec& out, Vec& scratch);
void add_into(const FieldCtx& F, const Vec& a, const Vec& b, Vec& out);
bool is_zero(const Vec& a);
// base-p odometer; returns false on wrap to zero.
bool inc(Vec& a, std::uint32_t p);
std::uint64_t key_of(const FieldCtx& F, const Vec& a);  // sum digit_i p^i
}  // namespace rawgf

// True iff x = y^ell for some y. For ell not dividing |F|-1 every element is
// an ell-th power. x = 0 is a caller bug, not "false".
bool is_lth_power(const FieldElem& x, std::uint32_t ell);

// Smallest gamma >= 1 with q^gamma = 1 mod ell; divides ell-1.
std::uint32_t order_mod(std::uint64_t q, std::uint32_t ell);

}  // namespace ellrank
