#pragma once

#include <vector>

#include "ellrank/curve.hpp"
#include "ellrank/tset.hpp"
#include "ellrank/tower.hpp"

namespace ellrank {

// f split over F_{q^gamma} into Frobenius-ordered conjugate factors, plus the
// residue field F_{q^gamma}[x]/(f_1) realized as an extension with the image
// of x. Product of factors = f; coefficientwise q-power Frobenius maps
// factors[i] to factors[i+1 mod gamma].
struct SplitData {
    CurveParams params;
    FieldCtxPtr big;            // F_{q^gamma}
    std::vector<Poly> factors;  // f_1..f_gamma over big; f_1 lex-least
    FieldCtxPtr residue_field;  // size q^d, parent big
    FieldElem x_res;            // root of f_1 in residue_field
};

// Requires gamma >= 2 and gamma | d.
SplitData split_conjugates(const CurveParams& params, std::uint64_t seed = 0);

// Same data with the cycle rotated so that factors[rot] becomes f_1.
SplitData rotate_split(const SplitData& split, std::uint32_t rot, std::uint64_t seed = 0);

// Image of h_n = prod f_i^(q^((i-1)(gamma-n)) - 1) in the residue field,
// with exponents reduced mod q^d - 1. Nonzero for 2 <= n <= gamma-1.
FieldElem h_residue(const SplitData& split, std::uint32_t n);

// Same value computed with full-size integer exponents; exercise only on
// small cases.
FieldElem h_residue_full_exponents(const SplitData& split, std::uint32_t n);

struct TSetResult {
    TSet tset;
    std::vector<FieldElem> residues;  // indexed by n; set for 2 <= n <= gamma-1
};

TSetResult compute_tset(const SplitData& split);

}  // namespace ellrank
