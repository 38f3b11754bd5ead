#include "ellrank/snf.hpp"

#include <algorithm>
#include <cstdlib>

namespace ellrank {

namespace {

bool find_min_pivot(const std::vector<std::vector<mpz_class>>& M, std::size_t t, std::size_t& pi, std::size_t& pj) {
    bool found = false;
    mpz_class best;
    for (std::size_t i = t; i < M.size(); ++i) {
        for (std::size_t j = t; j < M[i].size(); ++j) {
            if (M[i][j] == 0) continue;
            mpz_class a = abs(M[i][j]);
            if (!found || a < best) {
                best = a;
                pi = i;
                pj = j;
                found = true;
                if (best == 1) return true;
            }
        }
    }
    return found;
}

}  // namespace

std::vector<mpz_class> snf_diagonal(std::vector<std::vector<mpz_class>> M) {
    std::size_t r = M.size();
    std::size_t c = r ? M[0].size() : 0;
    std::size_t n = std::min(r, c);
    std::vector<mpz_class> diag(n, 0);
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t pi = t, pj = t;
        if (!find_min_pivot(M, t, pi, pj)) break;  // remaining block zero
        std::swap(M[pi], M[t]);
        if (pj != t)
            for (auto& row : M) std::swap(row[pj], row[t]);
        for (;;) {
            // clear column t below the pivot
            bool dirty = false;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (M[i][t] == 0) continue;
                mpz_class q = M[i][t] / M[t][t];  // truncated; remainder smaller than pivot
                if (q != 0)
                    for (std::size_t j = t; j < c; ++j) M[i][j] -= q * M[t][j];
                if (M[i][t] != 0) {
                    std::swap(M[i], M[t]);  // strictly smaller pivot
                    dirty = true;
                }
            }
            if (dirty) continue;
            // clear row t to the right of the pivot
            for (std::size_t j = t + 1; j < c; ++j) {
                if (M[t][j] == 0) continue;
                mpz_class q = M[t][j] / M[t][t];
                if (q != 0)
                    for (std::size_t i = t; i < r; ++i) M[i][j] -= q * M[i][t];
                if (M[t][j] != 0) {
                    for (std::size_t i = t; i < r; ++i) std::swap(M[i][j], M[i][t]);
                    dirty = true;
                }
            }
            if (dirty) continue;
            // pivot must divide the rest of the block for the divisor chain
            bool fixed = true;
            for (std::size_t i = t + 1; i < r && fixed; ++i) {
                for (std::size_t j = t + 1; j < c && fixed; ++j) {
                    if (M[i][j] % M[t][t] != 0) {
                        for (std::size_t jj = t; jj < c; ++jj) M[t][jj] += M[i][jj];
                        fixed = false;
                    }
                }
            }
            if (fixed) break;
        }
        diag[t] = abs(M[t][t]);
    }
    return diag;
}

std::pair<std::vector<std::vector<mpz_class>>, int> presolve_units(SparseMatrix m) {
    const int n = m.ncols;
    std::vector<bool> col_alive(n, true), row_alive(m.rows.size(), true);
    // column -> rows with nonzero entry
    std::vector<std::vector<int>> col_rows(n);
    auto rebuild_index = [&]() {
        for (auto& v : col_rows) v.clear();
        for (std::size_t i = 0; i < m.rows.size(); ++i) {
            if (!row_alive[i]) continue;
            for (auto& [j, v] : m.rows[i])
                if (v != 0 && col_alive[j]) col_rows[j].push_back(static_cast<int>(i));
        }
    };
    rebuild_index();
    for (;;) {
        // Markowitz-lite: among unit entries pick the one minimizing
        // (row nnz - 1) * (col nnz - 1)
        long best_score = -1;
        int br = -1, bc = -1;
        for (int j = 0; j < n; ++j) {
            if (!col_alive[j]) continue;
            for (int i : col_rows[j]) {
                if (!row_alive[i]) continue;
                auto it = m.rows[i].find(j);
                if (it == m.rows[i].end() || !(it->second == 1 || it->second == -1)) continue;
                long score = (static_cast<long>(m.rows[i].size()) - 1) *
                             (static_cast<long>(col_rows[j].size()) - 1);
                if (best_score < 0 || score < best_score) {
                    best_score = score;
                    br = i;
                    bc = j;
                }
            }
        }
        if (br < 0) break;
        mpz_class pv = m.rows[br][bc];
        for (int i : col_rows[bc]) {
            if (i == br || !row_alive[i]) continue;
            auto it = m.rows[i].find(bc);
            if (it == m.rows[i].end() || it->second == 0) continue;
            mpz_class mult = it->second * pv;  // pv in {1,-1}
            for (auto& [j, v] : m.rows[br]) {
                if (!col_alive[j]) continue;
                m.rows[i][j] -= mult * v;
            }
            m.rows[i].erase(bc);
        }
        row_alive[br] = false;
        col_alive[bc] = false;
        rebuild_index();
    }
    // densify surviving block
    std::vector<int> col_map(n, -1);
    int nc = 0;
    for (int j = 0; j < n; ++j)
        if (col_alive[j]) col_map[j] = nc++;
    std::vector<std::vector<mpz_class>> dense;
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        if (!row_alive[i]) continue;
        std::vector<mpz_class> row(nc, 0);
        bool nonzero = false;
        for (auto& [j, v] : m.rows[i]) {
            if (!col_alive[j] || v == 0) continue;
            row[col_map[j]] = v;
            nonzero = true;
        }
        if (nonzero) dense.push_back(std::move(row));
    }
    return {std::move(dense), nc};
}

}  // namespace ellrank
