#include "ellrank/predictor.hpp"

#include <numeric>
#include <sstream>

#include "ellrank/congruence.hpp"
#include "ellrank/errors.hpp"

namespace ellrank {

std::string RankPrediction::to_string() const {
    std::ostringstream os;
    os << "{B=" << B;
    if (Bprime) os << ", B'=" << *Bprime;
    os << ", lower=" << lower << ", upper=" << upper << ", parity=" << parity << ", possible=[";
    for (std::size_t i = 0; i < possible.size(); ++i) {
        if (i) os << ',';
        os << possible[i];
    }
    os << "], exact=" << (exact ? "true" : "false") << "}";
    return os.str();
}

namespace {

std::vector<int> parity_range(int lo, int hi, int parity) {
    std::vector<int> out;
    for (int r = lo; r <= hi; ++r)
        if ((r & 1) == parity) out.push_back(r);
    return out;
}

void finish(RankPrediction& p) {
    p.possible = parity_range(p.lower, p.upper, p.parity);
    p.exact = p.possible.size() == 1;
}

RankPrediction singleton(const CurveParams& params, int r) {
    RankPrediction p;
    p.B = bound_B(params);
    p.lower = p.upper = r;
    p.parity = r & 1;
    finish(p);
    return p;
}

}  // namespace

int bound_B(const CurveParams& params) {
    int g = static_cast<int>(std::gcd(params.d, params.gamma));
    return (g - 1) * static_cast<int>((params.ell - 1) / params.gamma);
}

RankPrediction basic_possible_set(const CurveParams& params) {
    RankPrediction p;
    p.B = bound_B(params);
    p.lower = std::min(p.B, 1);
    p.upper = p.B;
    p.parity = p.B & 1;
    finish(p);
    return p;
}

RankPrediction refine_with_tset(const CurveParams& params, const RankPrediction& basic, const TSet& tset) {
    if (params.gamma < 3 || params.d % params.gamma != 0)
        throw std::domain_error("refine_with_tset: gamma >= 3 and gamma | d required");
    if (tset.gamma != params.gamma) throw std::invalid_argument("refine_with_tset: T has wrong gamma");
    RankPrediction p = basic;
    int Bp = static_cast<int>(tset.size()) * static_cast<int>((params.ell - 1) / params.gamma);
    p.Bprime = Bp;
    if ((Bp & 1) != p.parity)
        throw inconsistency_error("refine_with_tset: B' parity differs from B parity");
    int L = std::min(Bp, 2);
    if (params.gamma % 2 == 0 && tset.contains(1 + params.gamma / 2)) L = std::max(L, 3);
    p.lower = std::max(p.lower, L);
    p.upper = std::min(p.upper, Bp);
    finish(p);
    for (int r : p.possible)
        if (r < basic.lower || r > basic.upper || (r & 1) != basic.parity)
            throw inconsistency_error("refine_with_tset: refined set escapes the basic set");
    return p;
}

RankPrediction predict(const CurveParams& params, const std::optional<TSet>& tset, std::uint64_t seed) {
    const std::uint32_t ell = params.ell;
    const std::uint32_t gamma = params.gamma;
    if (gamma <= 2) {
        bool q_is_minus_one = (params.q.q + 1) % ell == 0;
        int r = (q_is_minus_one && params.d % 2 == 0) ? static_cast<int>((ell - 1) / 2) : 0;
        return singleton(params, r);
    }
    if (std::gcd(params.d, gamma) == 2) return singleton(params, static_cast<int>((ell - 1) / gamma));
    RankPrediction basic = basic_possible_set(params);
    if (params.d % gamma == 0) {
        TSet t = tset ? *tset : compute_tset(split_conjugates(params, seed)).tset;
        return refine_with_tset(params, basic, t);
    }
    return basic;
}

}  // namespace ellrank
