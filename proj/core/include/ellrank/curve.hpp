#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ellrank/gf.hpp"
#include "ellrank/poly.hpp"

namespace ellrank {

// Standing hypotheses: ell >= 3 prime, gcd(q, ell) = 1, f monic irreducible,
// gcd(deg f, ell) = 1. Violations name the failed hypothesis.
enum class Hypothesis {
    ok,
    ell_not_odd_prime,
    q_not_coprime,
    f_not_monic,
    f_reducible,
    d_not_coprime,
};

const char* hypothesis_name(Hypothesis h);

struct hypothesis_error : std::invalid_argument {
    Hypothesis which;
    explicit hypothesis_error(Hypothesis h)
        : std::invalid_argument(std::string("curve hypothesis violated: ") + hypothesis_name(h)), which(h) {}
};

// Validated tuple (ell, q, f) for the curve y^ell = f(x), with derived
// invariants. genus = (ell-1)(d-1)/2.
struct CurveParams {
    std::uint32_t ell = 0;
    PrimePower q;
    FieldCtxPtr field;  // F_q context, seeded deterministically
    Poly f;
    std::uint32_t d = 0;
    std::uint32_t gamma = 0;
    std::uint64_t genus = 0;

    std::string to_record() const;  // {ell, p, e, f, gamma, genus}
};

// Deterministic F_q context for a given seed (identical seeds give identical
// generator conventions everywhere).
FieldCtxPtr field_for(const PrimePower& q, std::uint64_t seed = 0);

CurveParams validate(std::uint32_t ell, const PrimePower& q, const Poly& f);
// Non-throwing variant; res.first empty iff a hypothesis failed.
std::pair<std::optional<CurveParams>, Hypothesis> try_validate(std::uint32_t ell, const PrimePower& q, const Poly& f);

// Lexicographically least monic polynomial in the affine-substitution orbit
// { a^(-d) f(a x + b) : a in F_q^x, b in F_q }. Idempotent, constant on orbits.
Poly affine_orbit_canonical(const Poly& f);

// Substitution x -> a x + b, renormalized monic.
Poly affine_substitute(const Poly& f, const FieldElem& a, const FieldElem& b);

// Number of affine orbits of monic irreducible degree-d polynomials over F_q.
std::uint64_t orbit_count(const PrimePower& q, unsigned d, std::uint64_t seed = 0);

}  // namespace ellrank
