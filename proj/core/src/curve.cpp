#include "ellrank/curve.hpp"

#include <sstream>

namespace ellrank {

const char* hypothesis_name(Hypothesis h) {
    switch (h) {
        case Hypothesis::ok: return "ok";
        case Hypothesis::ell_not_odd_prime: return "ell-not-odd-prime";
        case Hypothesis::q_not_coprime: return "q-not-coprime";
        case Hypothesis::f_not_monic: return "f-not-monic";
        case Hypothesis::f_reducible: return "f-reducible";
        case Hypothesis::d_not_coprime: return "d-not-coprime";
    }
    return "?";
}

std::string CurveParams::to_record() const {
    std::ostringstream os;
    os << "{ell=" << ell << ", p=" << q.p << ", e=" << q.e << ", f=" << f.to_string() << ", gamma=" << gamma
       << ", genus=" << genus << "}";
    return os.str();
}

FieldCtxPtr field_for(const PrimePower& q, std::uint64_t seed) {
    return make_extension(FieldCtx::prime_field(q.p), q.e, seed);
}

std::pair<std::optional<CurveParams>, Hypothesis> try_validate(std::uint32_t ell, const PrimePower& q, const Poly& f) {
    if (ell < 3 || !is_prime_u32(ell)) return {std::nullopt, Hypothesis::ell_not_odd_prime};
    if (q.q % ell == 0) return {std::nullopt, Hypothesis::q_not_coprime};
    if (f.degree() < 1 || !f.is_monic()) return {std::nullopt, Hypothesis::f_not_monic};
    std::uint32_t d = static_cast<std::uint32_t>(f.degree());
    if (d % ell == 0) return {std::nullopt, Hypothesis::d_not_coprime};
    if (d > 1 && !is_irreducible(f)) return {std::nullopt, Hypothesis::f_reducible};
    CurveParams cp;
    cp.ell = ell;
    cp.q = q;
    cp.field = f.ctx();
    cp.f = f;
    cp.d = d;
    cp.gamma = order_mod(q.q, ell);
    cp.genus = static_cast<std::uint64_t>(ell - 1) * (d - 1) / 2;
    return {cp, Hypothesis::ok};
}

CurveParams validate(std::uint32_t ell, const PrimePower& q, const Poly& f) {
    auto [cp, why] = try_validate(ell, q, f);
    if (!cp) throw hypothesis_error(why);
    return *cp;
}

Poly affine_substitute(const Poly& f, const FieldElem& a, const FieldElem& b) {
    const auto& ctx = f.ctx();
    Poly lin(ctx, {b, a});
    Poly acc(ctx);
    for (std::size_t i = f.coeffs().size(); i-- > 0;) {
        acc = acc * lin;
        acc += Poly::constant(ctx, f.coeffs()[i]);
    }
    return make_monic(acc);
}

Poly affine_orbit_canonical(const Poly& f) {
    const auto& ctx = f.ctx();
    std::uint64_t Q = ctx->size().get_ui();
    Poly best = f;
    for (std::uint64_t av = 1; av < Q; ++av) {
        FieldElem a = ctx->from_uint(av);
        for (std::uint64_t bv = 0; bv < Q; ++bv) {
            Poly g = affine_substitute(f, a, ctx->from_uint(bv));
            if (lex_less(g, best)) best = g;
        }
    }
    return best;
}

std::uint64_t orbit_count(const PrimePower& q, unsigned d, std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("orbit_count: d >= 2 required");
    FieldCtxPtr F = field_for(q, seed);
    MonicIrreducibleRange range(F, d);
    std::uint64_t n = 0;
    while (auto f = range.next()) {
        if (affine_orbit_canonical(*f) == *f) ++n;
    }
    return n;
}

}  // namespace ellrank
