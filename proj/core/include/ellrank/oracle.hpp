#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ellrank/curve.hpp"
#include "ellrank/snf.hpp"
#include "ellrank/tower.hpp"

namespace ellrank {

inline constexpr std::uint64_t kDefaultPointBudget = 1ull << 26;

// Numerator of the zeta function: L(t) = sum a_i t^i with a_0 = 1, and
// a_{2g-i} = q^{g-i} a_i. L(1) is the class number h = #J(F_q).
struct LPoly {
    unsigned genus = 0;
    std::uint64_t q = 0;
    std::vector<mpz_class> a;  // size 2*genus + 1

    mpz_class class_number() const;
    // N_i recovered from the coefficients via Newton's identities.
    mpz_class point_count(unsigned i) const;
    void check_self_consistency() const;  // functional equation, Weil bound on a_1, L(1) > 0
};

// Point count N_i of the projective curve over F_{q^i} (one infinite point).
// Enumerates when q^i fits the budget; otherwise uses the closed form
// 1 + q^i valid when gamma does not divide i, and refuses when it does.
mpz_class count_points(const CurveParams& params, unsigned i, std::uint64_t budget = kDefaultPointBudget,
                       std::uint64_t seed = 0);

// L(t) by direct counting (Newton identities on N_1..N_g completed by the
// functional equation) when the enumeration fits the budget, else by
// character sums over F_{q^gamma} extensions completed by the functional
// equation of each character L-factor.
LPoly l_polynomial(const CurveParams& params, std::uint64_t seed = 0,
                   std::uint64_t budget = kDefaultPointBudget);

// The two underlying routes, exposed for cross-validation and for the CLI.
LPoly l_polynomial_via_counting(const CurveParams& params, std::uint64_t seed = 0,
                                std::uint64_t budget = kDefaultPointBudget);
LPoly l_polynomial_via_characters(const CurveParams& params, std::uint64_t seed = 0,
                                  std::uint64_t budget = kDefaultPointBudget);

// Full self-check battery: internal consistency plus N_i spot checks against
// direct enumeration for every i <= genus+1 that fits the spot budget.
void verify_lpoly(const CurveParams& params, const LPoly& L, std::uint64_t spot_budget = 1ull << 16,
                  std::uint64_t seed = 0);

// Prime of the affine order A = F_q[x][y]/(y^ell - f): (pi(x), g(y)) with g a
// monic irreducible factor of y^ell - f over the residue field of pi. The
// residue field of pi is realized inside Km via x -> x_img.
struct PrimeIdealRec {
    Poly pi;
    unsigned pi_degree = 0;
    bool ramified = false;  // the prime (f, y)
    FieldCtxPtr Km;         // abstract F_{q^m}, shared per degree
    FieldElem x_img;        // lex-least root of pi in Km
    Poly gy;                // factor of y^ell - f(x_img) over Km (in y)
    unsigned res_degree = 0;     // pi_degree * deg gy
    unsigned ramification = 1;   // ell at (f, y), 1 elsewhere
    bool in_factor_base = false; // res_degree <= bound (the ramified prime always)
};

struct FactorBase {
    CurveParams params;
    unsigned degree_bound = 0;  // column bound: res_degree <= this gets a column
    unsigned record_bound = 0;  // local data kept up to this residue degree
    std::uint64_t seed = 0;
    // Eager local data for pi of degree <= degree_bound; columns are assigned
    // to in_factor_base entries only.
    std::vector<PrimeIdealRec> primes;
    std::vector<int> column;  // parallel to primes; -1 when not in the base
    int ncols = 0;
    int ramified_column = -1;
    // index of first prime record per pi (records for one pi are contiguous)
    std::map<std::string, std::pair<int, int>> by_pi;  // pi string -> [begin, end)

    std::vector<const PrimeIdealRec*> base_primes() const;

    // Local data for any unramified pi up to record_bound, built on demand.
    // Not thread-safe: share one FactorBase per worker.
    const std::vector<PrimeIdealRec>& local_records(const Poly& pi) const;

  private:
    mutable std::map<std::string, std::vector<PrimeIdealRec>> lazy_;
    mutable std::map<unsigned, FieldCtxPtr> Km_cache_;
    friend FactorBase build_factor_base(const CurveParams&, unsigned, std::uint64_t, unsigned);
};

// All prime ideals over monic irreducibles of degree <= degree_bound, plus
// the ramified prime (f, y). record_bound (default degree_bound) caps the
// degree for which lazy local data may be requested.
FactorBase build_factor_base(const CurveParams& params, unsigned degree_bound, std::uint64_t seed = 0,
                             unsigned record_bound = 0);

// Valuation vector of the principal ideal (z), z = sum z[j] y^j != 0, over
// the factor base; nullopt when some valuation escapes the base.
std::optional<std::map<int, long>> valuations_of(const FactorBase& fb, const std::vector<Poly>& z,
                                                 std::uint64_t seed = 0);
// Same, with the norm Res_y(y^ell - f, z) supplied by the caller.
std::optional<std::map<int, long>> valuations_given_norm(const FactorBase& fb, const std::vector<Poly>& z,
                                                         const Poly& N, std::uint64_t seed = 0);

// Valuations allowing at most one prime outside the column bound but within
// the record bound (single-large-prime relations); such rows are combined in
// pairs by the relation search.
struct PartialValuations {
    std::map<int, long> cols;
    std::string large_key;  // empty when the relation is fully smooth
    long large_val = 0;
};
std::optional<PartialValuations> valuations_one_large(const FactorBase& fb, const std::vector<Poly>& z,
                                                      const Poly& N, std::uint64_t seed = 0);

// Norm of z computed by evaluation at enough points of a small extension and
// Lagrange interpolation; agrees with resultant_y on every input.
class NormCalculator {
  public:
    NormCalculator(const CurveParams& params, unsigned max_norm_degree, std::uint64_t seed = 0);
    Poly norm(const std::vector<Poly>& z) const;
    unsigned max_degree() const { return max_deg_; }

  private:
    CurveParams params_;
    unsigned max_deg_;
    FieldCtxPtr K_;
    std::vector<FieldElem> points_, f_at_;
    std::vector<std::vector<FieldElem>> lagrange_;  // weight * prod_{t != s}(x - x_t)
    std::map<std::uint64_t, FieldElem> descent_;    // key of embedded F_q value -> value
};

struct RelationSearchStats {
    std::uint64_t trials = 0;
    std::uint64_t smooth = 0;
};

// Rows = factor-base valuation vectors of principal ideals, including the
// structural rows for (y) and the fully-split (pi). Deterministic per seed.
SparseMatrix find_relations(const FactorBase& fb, std::size_t target_rows, std::uint64_t trial_budget,
                            std::uint64_t seed, RelationSearchStats* stats = nullptr);

// Elementary divisors d_1 | d_2 | ... (each > 1) with h = prod d_i == L(1)
// as the lattice-index certificate.
struct ClassGroupStruct {
    std::vector<mpz_class> divisors;
    mpz_class h = 0;
    bool certified = false;
};

struct OracleOptions {
    std::uint64_t seed = 0;
    std::uint64_t point_budget = kDefaultPointBudget;
    unsigned initial_degree_bound = 0;  // 0 = auto
    unsigned max_degree_bound = 10;
    unsigned large_prime_margin = 2;  // record_bound = degree_bound + margin
    std::uint64_t relation_budget = 40'000'000;
    mpz_class max_h = 0;  // 0 = no gate; nonzero refuses larger class numbers
};

ClassGroupStruct class_group(const CurveParams& params, const LPoly& L, const OracleOptions& opts = {});

unsigned ell_rank(const ClassGroupStruct& group, std::uint32_t ell);

struct OracleReport {
    LPoly L;
    ClassGroupStruct group;
    unsigned rank = 0;
    double wall_ms = 0;
};

OracleReport run_oracle(const CurveParams& params, const OracleOptions& opts = {});

}  // namespace ellrank
