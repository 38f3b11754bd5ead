#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellrank/curve.hpp"
#include "ellrank/tset.hpp"

namespace ellrank {

// Set of possible ell-ranks for a curve. possible = { r : lower <= r <= upper,
// r = parity mod 2 } after all refinements; exact iff a singleton. The output
// is a set, never a point estimate: the parameters provably do not determine
// the rank in general.
struct RankPrediction {
    int B = 0;
    std::optional<int> Bprime;
    int lower = 0;
    int upper = 0;
    int parity = 0;
    std::vector<int> possible;
    bool exact = false;

    std::string to_string() const;
};

// B = (gcd(d, gamma) - 1)(ell-1)/gamma.
int bound_B(const CurveParams& params);

// { r : min(B,1) <= r <= B, r = B mod 2 }.
RankPrediction basic_possible_set(const CurveParams& params);

// Requires gamma >= 3 and gamma | d. B' = |T|(ell-1)/gamma; lower bound
// max(min(B',2), 3 when gamma even and 1+gamma/2 in T); result is contained
// in the basic set.
RankPrediction refine_with_tset(const CurveParams& params, const RankPrediction& basic, const TSet& tset);

// Tightest set derivable: gamma <= 2 closed form; gcd(d,gamma) = 2 closed
// form; gamma >= 3 and gamma | d refined (T computed internally if absent);
// otherwise the basic set.
RankPrediction predict(const CurveParams& params, const std::optional<TSet>& tset = std::nullopt,
                       std::uint64_t seed = 0);

}  // namespace ellrank
