#include "ellrank/cyclotomic.hpp"

#include <stdexcept>

#include "ellrank/errors.hpp"

namespace ellrank {

namespace {
// Reduce a group-ring vector (indexed by exponent mod ell) to the power basis.
std::vector<mpz_class> reduce_group_ring(std::uint32_t ell, const std::vector<mpz_class>& v) {
    std::vector<mpz_class> c(ell - 1);
    for (std::uint32_t i = 0; i + 1 < ell; ++i) c[i] = v[i] - v[ell - 1];
    return c;
}
}  // namespace

CycInt CycInt::zeta_pow(std::uint32_t ell, std::uint32_t t) {
    std::vector<mpz_class> v(ell, 0);
    v[t % ell] = 1;
    CycInt r(ell);
    r.c_ = reduce_group_ring(ell, v);
    return r;
}

bool CycInt::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool CycInt::rational_value(mpz_class* out) const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    if (out) *out = c_[0];
    return true;
}

CycInt& CycInt::operator+=(const CycInt& o) {
    if (ell_ != o.ell_) throw std::invalid_argument("CycInt: mismatched ell");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

CycInt& CycInt::operator-=(const CycInt& o) {
    if (ell_ != o.ell_) throw std::invalid_argument("CycInt: mismatched ell");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

CycInt operator*(const CycInt& a, const CycInt& b) {
    if (a.ell_ != b.ell_) throw std::invalid_argument("CycInt: mismatched ell");
    std::uint32_t ell = a.ell_;
    std::vector<mpz_class> v(ell, 0);
    for (std::uint32_t i = 0; i + 1 < ell; ++i) {
        if (a.c_[i] == 0) continue;
        for (std::uint32_t j = 0; j + 1 < ell; ++j) {
            if (b.c_[j] == 0) continue;
            v[(i + j) % ell] += a.c_[i] * b.c_[j];
        }
    }
    CycInt r(ell);
    r.c_ = reduce_group_ring(ell, v);
    return r;
}

CycInt CycInt::operator*(const mpz_class& s) const {
    CycInt r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
}

CycInt CycInt::galois(std::uint32_t t) const {
    std::vector<mpz_class> v(ell_, 0);
    for (std::uint32_t i = 0; i + 1 < ell_; ++i) v[static_cast<std::uint64_t>(i) * t % ell_] += c_[i];
    CycInt r(ell_);
    r.c_ = reduce_group_ring(ell_, v);
    return r;
}

CycInt CycInt::divide_exact(const mpz_class& den) const {
    CycInt r(ell_);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        mpz_class q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), c_[i].get_mpz_t(), den.get_mpz_t());
        if (rem != 0) throw inconsistency_error("CycInt::divide_exact: not divisible");
        r.c_[i] = q;
    }
    return r;
}

CycInt CycInt::adjugate() const {
    CycInt prod(ell_, 1);
    for (std::uint32_t t = 2; t < ell_; ++t) prod = prod * galois(t);
    return prod;
}

mpz_class CycInt::norm() const {
    CycInt n = *this * adjugate();
    mpz_class v;
    if (!n.rational_value(&v)) throw inconsistency_error("CycInt::norm: norm not rational");
    return v;
}

}  // namespace ellrank
