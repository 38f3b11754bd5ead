#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ellrank/tset.hpp"

namespace ellrank {

// Height function on Z/gamma Z: heights[n] = k_n is the largest k for which
// column n carries a true Frobenius eigenvector (0 when the column is empty).
struct RooftopConfig {
    std::uint32_t ell = 0;
    std::uint32_t gamma = 0;
    std::uint32_t d = 0;  // only d mod gamma matters
    std::vector<int> heights;  // size gamma; heights[0] == 0 in valid configs

    std::string to_string() const;  // {gamma, ell, d, heights: [..]}
};

struct GridCell {
    std::uint32_t n = 0;
    int k = 0;
    bool shaded = false;   // column nonempty
    bool dark = false;     // k <= k_n
    bool circled = false;  // n - k + 1 = 0 mod gamma
};

GridCell grid_cell(const RooftopConfig& cfg, std::uint32_t n, int k);

// Column contribution c(n) = floor((k_n - 1 - n)/gamma) + 1 on the integer
// representative n in {0..gamma-1}.
int column_contribution(const RooftopConfig& cfg, std::uint32_t n);

// r = sum over n of max(c(n), 0); equals the number of dark circled cells.
int rank_of_config(const RooftopConfig& cfg);

struct ValidityReport {
    bool valid = true;
    std::vector<std::string> violations;
};

// Checks every proved constraint: (i) column emptiness, (ii) rooftop diagonal
// admissibility, (iii) one non-maximal rooftop per diagonal, (iv) the
// k-involution n <-> k-n for 1 <= k <= ell-2, (v) no even self-paired
// non-maximal rooftop, (vi) when gamma | d and T is given, k_n >= 2 iff n in T.
ValidityReport is_valid_config(const RooftopConfig& cfg, const std::optional<TSet>& tset = std::nullopt);

// Streams every valid configuration exactly once. Requires gamma | ell-1 and
// gcd(d, ell) = 1.
void enumerate_configs(std::uint32_t ell, std::uint32_t gamma, std::uint32_t d, const std::optional<TSet>& tset,
                       const std::function<void(const RooftopConfig&)>& sink);

std::vector<RooftopConfig> all_configs(std::uint32_t ell, std::uint32_t gamma, std::uint32_t d,
                                       const std::optional<TSet>& tset = std::nullopt);

std::set<int> achievable_ranks(std::uint32_t ell, std::uint32_t gamma, std::uint32_t d,
                               const std::optional<TSet>& tset = std::nullopt);

// ASCII grid in the chart conventions: light shading for nonempty cells, dark
// for cells up to the rooftop, circles on the main diagonal.
std::string ascii_grid(const RooftopConfig& cfg);
std::string svg_grid(const RooftopConfig& cfg);

// Checks the combinatorial identity behind the Frobenius-log commutation:
// sum_{i=1}^{ell-1} sum_{j=0}^{i} ((-1)^(j+1)/i) C(i,j) C(qj,k) =
// (-1)^(k+1) q/k for k > 0 (0 for k = 0), evaluated in F_ell.
bool verify_eta_identity(std::uint32_t ell, std::int64_t q, std::uint32_t k);

}  // namespace ellrank
