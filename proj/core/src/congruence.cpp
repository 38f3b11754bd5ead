#include "ellrank/congruence.hpp"

#include <algorithm>
#include <sstream>

#include "ellrank/errors.hpp"

namespace ellrank {

TSet TSet::trivial(std::uint32_t gamma) {
    TSet t;
    t.gamma = gamma;
    t.member.assign(gamma, false);
    if (gamma >= 2) t.member[1] = true;
    return t;
}

TSet TSet::from_members(std::uint32_t gamma, const std::vector<std::uint32_t>& ns) {
    TSet t = trivial(gamma);
    for (auto n : ns) {
        if (n == 0 || n >= gamma) throw std::invalid_argument("TSet: member out of {1..gamma-1}");
        t.member[n] = true;
    }
    if (gamma >= 2 && !t.member[1]) throw std::invalid_argument("TSet: 1 must be a member");
    return t;
}

TSet TSet::parse(std::uint32_t gamma, const std::string& csv) {
    std::vector<std::uint32_t> ns;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) ns.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    return from_members(gamma, ns);
}

std::size_t TSet::size() const {
    std::size_t n = 0;
    for (bool b : member) n += b;
    return n;
}

std::vector<std::uint32_t> TSet::members() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t n = 0; n < gamma; ++n)
        if (member[n]) out.push_back(n);
    return out;
}

std::string TSet::to_string() const {
    std::ostringstream os;
    os << '[';
    bool first = true;
    for (auto n : members()) {
        if (!first) os << ',';
        os << n;
        first = false;
    }
    os << ']';
    return os.str();
}

bool TSet::closed_under_reflection() const {
    for (std::uint32_t n = 2; n < gamma; ++n) {
        if (member[n]) {
            std::uint32_t m = (1 + gamma - n % gamma) % gamma;  // 1-n mod gamma
            if (m == 0 || !member[m]) return false;
        }
    }
    return true;
}

namespace {

SplitData assemble_split(const CurveParams& params, const FieldCtxPtr& big, std::vector<Poly> cycle,
                         std::uint64_t seed) {
    SplitData s;
    s.params = params;
    s.big = big;
    s.factors = std::move(cycle);
    auto [rf, xr] = quotient_field(big, s.factors[0], seed);
    s.residue_field = rf;
    s.x_res = xr;
    return s;
}

}  // namespace

SplitData split_conjugates(const CurveParams& params, std::uint64_t seed) {
    const std::uint32_t gamma = params.gamma;
    if (gamma < 2) throw std::domain_error("split_conjugates: gamma >= 2 required");
    if (params.d % gamma != 0) throw std::domain_error("split_conjugates: gamma | d required");
    FieldCtxPtr big = make_extension(params.field, gamma, seed);
    Poly fbig = map_coeffs(params.f, big);
    auto fac = factor(fbig, seed);
    if (fac.size() != gamma) throw inconsistency_error("split_conjugates: expected gamma conjugate factors");
    std::vector<Poly> pool;
    for (auto& [g, m] : fac) {
        if (m != 1 || g.degree() != static_cast<int>(params.d / gamma))
            throw inconsistency_error("split_conjugates: unexpected factor shape");
        pool.push_back(g);
    }
    // factor() sorts lexicographically, so pool[0] is the lex-least factor.
    std::vector<Poly> cycle{pool[0]};
    for (std::uint32_t i = 1; i < gamma; ++i) {
        Poly nxt = frobenius_coeffwise(cycle.back(), params.q.q);
        if (std::find(pool.begin(), pool.end(), nxt) == pool.end())
            throw inconsistency_error("split_conjugates: Frobenius left the factor set");
        cycle.push_back(nxt);
    }
    if (frobenius_coeffwise(cycle.back(), params.q.q) != cycle.front())
        throw inconsistency_error("split_conjugates: Frobenius orbit does not close");
    return assemble_split(params, big, std::move(cycle), seed);
}

SplitData rotate_split(const SplitData& split, std::uint32_t rot, std::uint64_t seed) {
    std::uint32_t gamma = split.params.gamma;
    std::vector<Poly> cycle;
    cycle.reserve(gamma);
    for (std::uint32_t i = 0; i < gamma; ++i) cycle.push_back(split.factors[(rot + i) % gamma]);
    return assemble_split(split.params, split.big, std::move(cycle), seed);
}

namespace {

FieldElem h_residue_impl(const SplitData& split, std::uint32_t n, bool reduce_exponents) {
    const std::uint32_t gamma = split.params.gamma;
    if (n < 2 || n >= gamma) throw std::invalid_argument("h_residue: n out of {2..gamma-1}");
    mpz_class group_order = split.residue_field->size() - 1;  // q^d - 1
    mpz_class q(static_cast<unsigned long>(split.params.q.q));
    FieldElem acc = split.residue_field->one();
    for (std::uint32_t i = 2; i <= gamma; ++i) {  // i = 1 contributes exponent 0
        mpz_class e;
        unsigned long exp_of_q = static_cast<unsigned long>(i - 1) * (gamma - n);
        if (reduce_exponents) {
            mpz_powm_ui(e.get_mpz_t(), q.get_mpz_t(), exp_of_q, group_order.get_mpz_t());
            e = (e - 1 + group_order) % group_order;
        } else {
            mpz_pow_ui(e.get_mpz_t(), q.get_mpz_t(), exp_of_q);
            e -= 1;
        }
        FieldElem base = eval_embedded(split.factors[i - 1], split.x_res);
        if (base.is_zero()) throw inconsistency_error("h_residue: conjugate factor vanished at the residue point");
        acc *= pow(base, e);
    }
    if (acc.is_zero()) throw inconsistency_error("h_residue: zero residue");
    return acc;
}

}  // namespace

FieldElem h_residue(const SplitData& split, std::uint32_t n) { return h_residue_impl(split, n, true); }

FieldElem h_residue_full_exponents(const SplitData& split, std::uint32_t n) {
    return h_residue_impl(split, n, false);
}

TSetResult compute_tset(const SplitData& split) {
    const std::uint32_t gamma = split.params.gamma;
    TSetResult r;
    r.tset = TSet::trivial(gamma);
    r.residues.resize(gamma);
    for (std::uint32_t n = 2; n < gamma; ++n) {
        FieldElem h = h_residue(split, n);
        r.residues[n] = h;
        if (is_lth_power(h, split.params.ell)) r.tset.member[n] = true;
    }
    return r;
}

}  // namespace ellrank
