#pragma once

#include <vector>

#include "ellrank/oracle.hpp"

namespace ellrank {
namespace detail {

// F_p-linear inverse of the evaluation map F_q[x]/(pi) -> Km, x -> x_img.
struct ResiduePullback {
    FieldCtxPtr field;  // F_q
    FieldCtxPtr Km;
    unsigned m;  // deg pi
    std::vector<std::vector<std::uint32_t>> inv;  // (em x em) over F_p

    ResiduePullback(const FieldCtxPtr& field_, const FieldCtxPtr& Km_, const FieldElem& x_img, unsigned m_);

    // Km element -> its polynomial representative in F_q[x], deg < m.
    Poly pull(const FieldElem& w) const;
};

}  // namespace detail
}  // namespace ellrank
