#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace ellrank {

// Element of Z[zeta_ell] in the power basis 1, zeta, ..., zeta^(ell-2),
// with zeta^(ell-1) = -(1 + zeta + ... + zeta^(ell-2)).
class CycInt {
  public:
    CycInt() = default;
    explicit CycInt(std::uint32_t ell) : ell_(ell), c_(ell - 1, 0) {}
    CycInt(std::uint32_t ell, const mpz_class& rational) : CycInt(ell) { c_[0] = rational; }

    std::uint32_t ell() const { return ell_; }
    const std::vector<mpz_class>& coords() const { return c_; }

    static CycInt zeta_pow(std::uint32_t ell, std::uint32_t t);

    bool is_zero() const;
    // True iff the element lies in Z; then *out is its value.
    bool rational_value(mpz_class* out) const;

    CycInt& operator+=(const CycInt& o);
    CycInt& operator-=(const CycInt& o);
    friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
    friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }
    friend CycInt operator*(const CycInt& a, const CycInt& b);
    CycInt operator*(const mpz_class& s) const;
    friend bool operator==(const CycInt& a, const CycInt& b) { return a.ell_ == b.ell_ && a.c_ == b.c_; }

    // zeta -> zeta^t, t coprime to ell.
    CycInt galois(std::uint32_t t) const;
    CycInt conj() const { return galois(ell_ - 1); }

    // Coordinatewise exact division; throws if not divisible.
    CycInt divide_exact(const mpz_class& den) const;

    // Product of galois(t) over all t != 1; self * this_product is the norm.
    CycInt adjugate() const;
    mpz_class norm() const;

  private:
    std::uint32_t ell_ = 0;
    std::vector<mpz_class> c_;
};

}  // namespace ellrank
