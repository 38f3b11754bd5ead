#pragma once

#include <map>
#include <vector>

#include <gmpxx.h>

namespace ellrank {

// Smith normal form diagonal of an integer matrix, in divisibility order
// (d_1 | d_2 | ...), with nonnegative entries. The returned vector has
// min(rows, cols) entries; trailing zeros indicate rank deficiency.
std::vector<mpz_class> snf_diagonal(std::vector<std::vector<mpz_class>> M);

// Sparse relation matrix: rows are exponent vectors over ncols generators.
struct SparseMatrix {
    int ncols = 0;
    std::vector<std::map<int, mpz_class>> rows;
};

// Eliminates generators with a +-1 pivot (Markowitz-style choice), shrinking
// the presentation without changing the quotient group up to isomorphism.
// Returns the residual presentation as a dense matrix together with the
// number of surviving generators.
std::pair<std::vector<std::vector<mpz_class>>, int> presolve_units(SparseMatrix m);

}  // namespace ellrank
