#pragma once

#include <utility>

#include "ellrank/gf.hpp"
#include "ellrank/poly.hpp"

namespace ellrank {

// Field of size |base|^(deg h) realizing base[x]/(h) for h monic irreducible
// over base, together with the image of x (the lex-least root of h, for
// reproducibility). The returned field carries base as its parent.
std::pair<FieldCtxPtr, FieldElem> quotient_field(const FieldCtxPtr& base, const Poly& h, std::uint64_t seed);

}  // namespace ellrank
