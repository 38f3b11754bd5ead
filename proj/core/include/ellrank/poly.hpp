#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ellrank/gf.hpp"

namespace ellrank {

// Dense univariate polynomial over a FieldCtx. Coefficients little-endian,
// no trailing zeros; the zero polynomial has an empty coefficient vector.
class Poly {
  public:
    Poly() = default;
    explicit Poly(FieldCtxPtr ctx) : ctx_(std::move(ctx)) {}
    Poly(FieldCtxPtr ctx, std::vector<FieldElem> coeffs);

    const FieldCtxPtr& ctx() const { return ctx_; }
    const std::vector<FieldElem>& coeffs() const { return c_; }

    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

    FieldElem coeff(std::size_t i) const;  // 0 beyond degree
    FieldElem leading() const;

    static Poly x(const FieldCtxPtr& ctx);
    static Poly constant(const FieldCtxPtr& ctx, const FieldElem& c);
    // Coefficients encoded as integers < |field| (base-p digit values).
    static Poly from_uints(const FieldCtxPtr& ctx, const std::vector<std::uint64_t>& v);
    // "1,1,0,0,1" means 1 + x + x^4 (coefficient integers < |field|).
    static Poly parse(const FieldCtxPtr& ctx, const std::string& s);
    std::string to_string() const;

    friend bool operator==(const Poly& a, const Poly& b) { return a.ctx_ == b.ctx_ && a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly operator*(const FieldElem& s) const;

    void normalize();

  private:
    FieldCtxPtr ctx_;
    std::vector<FieldElem> c_;
};

// quotient/remainder; b nonzero.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly poly_mod(const Poly& a, const Poly& m);
// exact division; throws inconsistency_error on nonzero remainder.
Poly divexact(const Poly& a, const Poly& b);

Poly make_monic(const Poly& a);
Poly derivative(const Poly& a);
FieldElem eval(const Poly& a, const FieldElem& x);

// Monic gcd; gcd(f, 0) = monic(f).
Poly poly_gcd(const Poly& a, const Poly& b);

// (g, u, v) with u a + v b = g = monic gcd(a, b).
std::tuple<Poly, Poly, Poly> poly_ext_gcd(const Poly& a, const Poly& b);

// base^e mod m (e >= 0).
Poly powmod(const Poly& base, const mpz_class& e, const Poly& m);

// Coefficients of f embedded into K; K must have f's field as an ancestor.
Poly map_coeffs(const Poly& f, const FieldCtxPtr& K);
// Evaluate f at a point of an extension of f's coefficient field.
FieldElem eval_embedded(const Poly& f, const FieldElem& x);
// Apply c -> c^q to every coefficient.
Poly frobenius_coeffwise(const Poly& f, std::uint64_t q);

// Rabin's test. deg f >= 1 required.
bool is_irreducible(const Poly& f);

// Monic irreducible factors with multiplicities, lex-sorted; the product of
// factor^mult times the leading coefficient reproduces the input.
// Deterministic per seed (distinct-degree then seeded equal-degree splitting).
std::vector<std::pair<Poly, int>> factor(const Poly& f, std::uint64_t seed);

// Roots in the coefficient field, lex-sorted.
std::vector<FieldElem> roots(const Poly& f, std::uint64_t seed);

// Streams every monic irreducible of degree d exactly once, in lexicographic
// coefficient order (most significant coefficient first).
class MonicIrreducibleRange {
  public:
    MonicIrreducibleRange(FieldCtxPtr ctx, unsigned d);
    std::optional<Poly> next();

  private:
    FieldCtxPtr ctx_;
    unsigned d_;
    mpz_class index_, count_;
};

// (1/d) sum_{m|d} mu(m) Q^{d/m}
mpz_class count_monic_irreducible(const mpz_class& Q, unsigned d);

// Res_y(y^ell - f(x), z(x,y)) as a polynomial in x; z given by its y-power
// coefficients (z = sum z[j] y^j). Sylvester determinant with fraction-free
// elimination.
Poly resultant_y(std::uint32_t ell, const Poly& f, const std::vector<Poly>& z);

// Degree-first, then most-significant-coefficient order.
bool lex_less(const Poly& a, const Poly& b);

}  // namespace ellrank
