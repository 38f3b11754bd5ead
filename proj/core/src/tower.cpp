#include <random>

#include "ellrank/errors.hpp"
#include "ellrank/tower.hpp"

namespace ellrank {

namespace {

// Seeded pseudo-random candidates, first irreducible wins: field contexts are
// reproducible across runs.
std::vector<std::uint32_t> find_modulus(std::uint32_t p, unsigned M, std::uint64_t seed) {
    FieldCtxPtr Fp = FieldCtx::prime_field(p);
    std::mt19937_64 rng(seed ^ (0xA5A5A5A5ULL * p) ^ (0x1234ULL * M));
    for (;;) {
        std::vector<std::uint32_t> cand(M + 1, 0);
        cand[M] = 1;
        for (unsigned i = 0; i < M; ++i) cand[i] = static_cast<std::uint32_t>(rng() % p);
        std::vector<FieldElem> c;
        c.reserve(M + 1);
        for (auto d : cand) c.push_back(Fp->from_uint(d));
        if (is_irreducible(Poly(Fp, std::move(c)))) return cand;
    }
}

}  // namespace

FieldCtxPtr make_extension(const FieldCtxPtr& base, unsigned m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("make_extension: m >= 1 required");
    if (m == 1) return base;  // identity embedding
    const std::uint32_t p = base->p();
    const unsigned M = base->degree() * m;
    auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
    ctx->p_ = p;
    ctx->m_ = M;
    ctx->mod_ = find_modulus(p, M, seed);
    mpz_ui_pow_ui(ctx->size_.get_mpz_t(), p, M);
    ctx->parent_ = base;
    FieldCtxPtr K = ctx;
    // Embedding: image of the base generator = a root of the base modulus in K
    // (lex-least root, for reproducibility).
    std::vector<FieldElem> modc;
    modc.reserve(base->modulus().size());
    for (auto d : base->modulus()) modc.push_back(K->from_uint(d));
    auto rs = roots(Poly(K, std::move(modc)), seed);
    if (rs.empty()) throw inconsistency_error("make_extension: base modulus has no root in extension");
    ctx->parent_gen_img_ = rs.front();
    return K;
}

std::pair<FieldCtxPtr, FieldElem> quotient_field(const FieldCtxPtr& base, const Poly& h, std::uint64_t seed) {
    if (h.ctx() != base) throw std::invalid_argument("quotient_field: h must live over base");
    if (!h.is_monic() || h.degree() < 1) throw std::invalid_argument("quotient_field: h must be monic nonconstant");
    if (h.degree() == 1) return {base, -h.coeffs()[0]};
    FieldCtxPtr K = make_extension(base, static_cast<unsigned>(h.degree()), seed);
    auto rs = roots(map_coeffs(h, K), seed);
    if (rs.empty()) throw inconsistency_error("quotient_field: h has no root in its splitting field");
    return {K, rs.front()};
}

}  // namespace ellrank
