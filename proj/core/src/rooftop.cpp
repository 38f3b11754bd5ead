#include "ellrank/rooftop.hpp"

#include <algorithm>
#include <sstream>

#include "ellrank/errors.hpp"
#include "ellrank/gf.hpp"

namespace ellrank {

namespace {

std::uint32_t mod_gamma(std::int64_t v, std::uint32_t gamma) {
    std::int64_t m = v % static_cast<std::int64_t>(gamma);
    if (m < 0) m += gamma;
    return static_cast<std::uint32_t>(m);
}

// Column n is nonempty iff gamma | dn and gamma does not divide n.
bool column_nonempty(std::uint32_t gamma, std::uint32_t d, std::uint32_t n) {
    return mod_gamma(static_cast<std::int64_t>(d) * n, gamma) == 0 && mod_gamma(n, gamma) != 0;
}

int floor_div(int a, int b) {  // b > 0
    int q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

}  // namespace

std::string RooftopConfig::to_string() const {
    std::ostringstream os;
    os << "{gamma=" << gamma << ", ell=" << ell << ", d=" << d << ", heights=[";
    for (std::size_t i = 0; i < heights.size(); ++i) {
        if (i) os << ',';
        os << heights[i];
    }
    os << "]}";
    return os.str();
}

GridCell grid_cell(const RooftopConfig& cfg, std::uint32_t n, int k) {
    GridCell c;
    c.n = n;
    c.k = k;
    c.shaded = column_nonempty(cfg.gamma, cfg.d, n);
    c.dark = k <= cfg.heights[n] && k >= 1;
    c.circled = mod_gamma(static_cast<std::int64_t>(n) - k + 1, cfg.gamma) == 0;
    return c;
}

int column_contribution(const RooftopConfig& cfg, std::uint32_t n) {
    return floor_div(cfg.heights[n] - 1 - static_cast<int>(n), static_cast<int>(cfg.gamma)) + 1;
}

int rank_of_config(const RooftopConfig& cfg) {
    int r = 0;
    for (std::uint32_t n = 1; n < cfg.gamma; ++n) r += std::max(column_contribution(cfg, n), 0);
    return r;
}

ValidityReport is_valid_config(const RooftopConfig& cfg, const std::optional<TSet>& tset) {
    ValidityReport rep;
    auto fail = [&rep](const std::string& msg) {
        rep.valid = false;
        rep.violations.push_back(msg);
    };
    const std::uint32_t gamma = cfg.gamma;
    const int ell = static_cast<int>(cfg.ell);
    if (cfg.heights.size() != gamma) throw std::invalid_argument("is_valid_config: heights size != gamma");
    for (std::uint32_t n = 0; n < gamma; ++n)
        if (cfg.heights[n] < 0 || cfg.heights[n] > ell - 1)
            throw std::invalid_argument("is_valid_config: height out of range");

    // (i) column emptiness
    for (std::uint32_t n = 0; n < gamma; ++n) {
        bool nonempty = column_nonempty(gamma, cfg.d, n);
        if ((cfg.heights[n] >= 1) != nonempty) {
            std::ostringstream os;
            os << "(i) column " << n << (nonempty ? " must carry an eigenvector" : " must be empty");
            fail(os.str());
        }
    }
    // (ii) rooftop diagonals: gamma | d(n-k_n), gamma does not divide n-k_n
    for (std::uint32_t n = 0; n < gamma; ++n) {
        int k = cfg.heights[n];
        if (k < 1) continue;
        std::int64_t diff = static_cast<std::int64_t>(n) - k;
        if (!(mod_gamma(diff * cfg.d, gamma) == 0 && mod_gamma(diff, gamma) != 0)) {
            std::ostringstream os;
            os << "(ii) rooftop at column " << n << " has inadmissible diagonal";
            fail(os.str());
        }
    }
    // (iii) at most one non-maximal rooftop per diagonal
    for (std::uint32_t n = 0; n < gamma; ++n) {
        int kn = cfg.heights[n];
        if (kn < 1 || kn > ell - 2) continue;
        for (std::uint32_t m = n + 1; m < gamma; ++m) {
            int km = cfg.heights[m];
            if (km < 1 || km > ell - 2) continue;
            if (mod_gamma(static_cast<std::int64_t>(n) - kn, gamma) ==
                mod_gamma(static_cast<std::int64_t>(m) - km, gamma)) {
                std::ostringstream os;
                os << "(iii) non-maximal rooftops at columns " << n << " and " << m << " share a diagonal";
                fail(os.str());
            }
        }
    }
    // (iv) k_n = k iff k_{k-n} = k for 1 <= k <= ell-2
    for (std::uint32_t n = 0; n < gamma; ++n) {
        int k = cfg.heights[n];
        if (k < 1 || k > ell - 2) continue;
        std::uint32_t partner = mod_gamma(static_cast<std::int64_t>(k) - n, gamma);
        if (cfg.heights[partner] != k) {
            std::ostringstream os;
            os << "(iv) rooftop pair (" << n << "," << partner << ") heights differ";
            fail(os.str());
        }
    }
    // (v) no non-maximal rooftop with k_n even and k_n = 2n mod gamma
    for (std::uint32_t n = 0; n < gamma; ++n) {
        int k = cfg.heights[n];
        if (k < 1 || k > ell - 2) continue;
        if (k % 2 == 0 && mod_gamma(k - 2 * static_cast<std::int64_t>(n), gamma) == 0) {
            std::ostringstream os;
            os << "(v) even self-paired rooftop at column " << n;
            fail(os.str());
        }
    }
    // (vi) congruence layer: k_n >= 2 iff n in T
    if (tset) {
        if (tset->gamma != gamma) throw std::invalid_argument("is_valid_config: T has wrong gamma");
        if (mod_gamma(cfg.d, gamma) == 0) {
            for (std::uint32_t n = 1; n < gamma; ++n) {
                bool deep = cfg.heights[n] >= 2;
                if (deep != tset->contains(n)) {
                    std::ostringstream os;
                    os << "(vi) column " << n << (tset->contains(n) ? " must reach k=2" : " must stop at k<=1");
                    fail(os.str());
                }
            }
        }
    }
    return rep;
}

namespace {

struct Enumerator {
    std::uint32_t ell, gamma, d;
    const std::optional<TSet>* tset;
    const std::function<void(const RooftopConfig&)>* sink;
    std::vector<std::uint32_t> free_cols;  // columns with a choice, most constrained first
    RooftopConfig cfg;

    bool pair_ok(std::uint32_t n) const {
        int k = cfg.heights[n];
        // checks against all already-assigned columns (assigned = not "unset")
        std::int64_t diag_n = static_cast<std::int64_t>(n) - k;
        for (std::uint32_t m = 0; m < gamma; ++m) {
            if (m == n) continue;
            int km = cfg.heights[m];
            if (km == -1) continue;  // not assigned yet
            bool n_nonmax = k >= 1 && k <= static_cast<int>(ell) - 2;
            bool m_nonmax = km >= 1 && km <= static_cast<int>(ell) - 2;
            if (n_nonmax && m_nonmax &&
                mod_gamma(diag_n, gamma) == mod_gamma(static_cast<std::int64_t>(m) - km, gamma))
                return false;  // (iii)
            if (n_nonmax && mod_gamma(static_cast<std::int64_t>(k) - n, gamma) == m && km != k)
                return false;  // (iv) forward
            if (m_nonmax && mod_gamma(static_cast<std::int64_t>(km) - m, gamma) == n && k != km)
                return false;  // (iv) backward
        }
        return true;
    }

    bool self_ok(std::uint32_t n) const {
        int k = cfg.heights[n];
        if (k == 0) return true;
        std::int64_t diff = static_cast<std::int64_t>(n) - k;
        if (!(mod_gamma(diff * d, gamma) == 0 && mod_gamma(diff, gamma) != 0)) return false;  // (ii)
        bool nonmax = k <= static_cast<int>(ell) - 2;
        if (nonmax && k % 2 == 0 && mod_gamma(k - 2 * static_cast<std::int64_t>(n), gamma) == 0)
            return false;  // (v)
        if (nonmax && k >= 1) {
            std::uint32_t partner = mod_gamma(static_cast<std::int64_t>(k) - n, gamma);
            if (partner != n && cfg.heights[partner] != -1 && cfg.heights[partner] != k) return false;  // (iv)
            if (partner == n) return true;
        }
        return true;
    }

    void dfs(std::size_t idx) {
        if (idx == free_cols.size()) {
            RooftopConfig out = cfg;
            (*sink)(out);
            return;
        }
        std::uint32_t n = free_cols[idx];
        int lo = 1, hi = static_cast<int>(ell) - 1;
        if (*tset && mod_gamma(d, gamma) == 0) {
            if ((*tset)->contains(n)) lo = 2;
            else hi = 1;
        }
        for (int k = lo; k <= hi; ++k) {
            cfg.heights[n] = k;
            if (self_ok(n) && pair_ok(n)) dfs(idx + 1);
        }
        cfg.heights[n] = -1;
    }
};

}  // namespace

void enumerate_configs(std::uint32_t ell, std::uint32_t gamma, std::uint32_t d, const std::optional<TSet>& tset,
                       const std::function<void(const RooftopConfig&)>& sink) {
    if (gamma < 1 || (ell - 1) % gamma != 0)
        throw std::invalid_argument("enumerate_configs: gamma | ell-1 required");
    if (d % ell == 0) throw std::invalid_argument("enumerate_configs: gcd(d, ell) = 1 required");
    Enumerator en;
    en.ell = ell;
    en.gamma = gamma;
    en.d = d;
    en.tset = &tset;
    en.sink = &sink;
    en.cfg.ell = ell;
    en.cfg.gamma = gamma;
    en.cfg.d = d;
    en.cfg.heights.assign(gamma, -1);
    for (std::uint32_t n = 0; n < gamma; ++n)
        if (!column_nonempty(gamma, d, n)) en.cfg.heights[n] = 0;
    for (std::uint32_t n = 0; n < gamma; ++n)
        if (en.cfg.heights[n] == -1) en.free_cols.push_back(n);
    // With T given, columns outside T are pinned to k=1; assign them first.
    std::stable_sort(en.free_cols.begin(), en.free_cols.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (tset && d % gamma == 0) {
            bool ta = tset->contains(a), tb = tset->contains(b);
            if (ta != tb) return !ta;
        }
        return false;
    });
    // Wrap the sink with a final full validity check.
    std::function<void(const RooftopConfig&)> checked = [&](const RooftopConfig& c) {
        if (is_valid_config(c, tset).valid) sink(c);
    };
    en.sink = &checked;
    en.dfs(0);
}

std::vector<RooftopConfig> all_configs(std::uint32_t ell, std::uint32_t gamma, std::uint32_t d,
                                       const std::optional<TSet>& tset) {
    std::vector<RooftopConfig> out;
    enumerate_configs(ell, gamma, d, tset, [&out](const RooftopConfig& c) { out.push_back(c); });
    return out;
}

std::set<int> achievable_ranks(std::uint32_t ell, std::uint32_t gamma, std::uint32_t d,
                               const std::optional<TSet>& tset) {
    std::set<int> ranks;
    enumerate_configs(ell, gamma, d, tset, [&ranks](const RooftopConfig& c) { ranks.insert(rank_of_config(c)); });
    return ranks;
}

std::string ascii_grid(const RooftopConfig& cfg) {
    std::ostringstream os;
    for (int k = static_cast<int>(cfg.ell) - 1; k >= 1; --k) {
        os << (k < 10 ? " " : "") << k << " |";
        for (std::uint32_t n = 0; n < cfg.gamma; ++n) {
            GridCell c = grid_cell(cfg, n, k);
            char fill = c.dark ? '#' : (c.shaded ? '.' : ' ');
            if (c.circled) os << '(' << fill << ')';
            else os << ' ' << fill << ' ';
        }
        os << '\n';
    }
    os << "   +";
    for (std::uint32_t n = 0; n < cfg.gamma; ++n) os << "---";
    os << "\n    ";
    for (std::uint32_t n = 0; n < cfg.gamma; ++n) os << n << "  ";
    os << "\n";
    return os.str();
}

std::string svg_grid(const RooftopConfig& cfg) {
    const int cell = 24, margin = 30;
    int w = margin * 2 + cell * static_cast<int>(cfg.gamma);
    int h = margin * 2 + cell * (static_cast<int>(cfg.ell) - 1);
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    for (int k = 1; k <= static_cast<int>(cfg.ell) - 1; ++k) {
        for (std::uint32_t n = 0; n < cfg.gamma; ++n) {
            GridCell c = grid_cell(cfg, n, k);
            int x = margin + cell * static_cast<int>(n);
            int y = margin + cell * (static_cast<int>(cfg.ell) - 1 - k);
            const char* fill = c.dark ? "#8c8c8c" : (c.shaded ? "#d9d9d9" : "#ffffff");
            os << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
               << "\" fill=\"" << fill << "\" stroke=\"#202020\"/>\n";
            if (c.circled)
                os << "  <circle cx=\"" << x + cell / 2 << "\" cy=\"" << y + cell / 2 << "\" r=\"" << cell / 2 - 2
                   << "\" fill=\"none\" stroke=\"#202020\"/>\n";
        }
    }
    os << "  <text x=\"" << margin << "\" y=\"" << h - 8 << "\" font-size=\"12\">ell=" << cfg.ell
       << " gamma=" << cfg.gamma << " d=" << cfg.d << " r=" << rank_of_config(cfg) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

bool verify_eta_identity(std::uint32_t ell, std::int64_t q, std::uint32_t k) {
    if (!is_prime_u32(ell)) throw std::invalid_argument("verify_eta_identity: ell must be prime");
    if (k > ell - 1) throw std::invalid_argument("verify_eta_identity: k out of range");
    auto inv_mod = [ell](std::uint64_t x) {
        std::uint64_t r = 1, b = x % ell, e = ell - 2;
        while (e) {
            if (e & 1) r = r * b % ell;
            b = b * b % ell;
            e >>= 1;
        }
        return r;
    };
    std::uint64_t qm = static_cast<std::uint64_t>(((q % static_cast<std::int64_t>(ell)) + ell) % ell);
    // C(N, k) mod ell for k < ell: product formula, k! invertible
    auto binom_mod = [&](std::uint64_t N, std::uint32_t kk) {
        std::uint64_t num = 1;
        for (std::uint32_t t = 0; t < kk; ++t) {
            std::uint64_t factor = (N + ell - t % ell) % ell;
            num = num * factor % ell;
        }
        std::uint64_t kfact = 1;
        for (std::uint32_t t = 2; t <= kk; ++t) kfact = kfact * t % ell;
        return num * inv_mod(kfact) % ell;
    };
    // Pascal triangle mod ell for C(i, j), i <= ell-1
    std::vector<std::vector<std::uint64_t>> C(ell, std::vector<std::uint64_t>(ell, 0));
    for (std::uint32_t i = 0; i < ell; ++i) {
        C[i][0] = 1;
        for (std::uint32_t j = 1; j <= i; ++j) C[i][j] = (C[i - 1][j - 1] + C[i - 1][j]) % ell;
    }
    std::uint64_t lhs = 0;
    for (std::uint32_t i = 1; i <= ell - 1; ++i) {
        std::uint64_t inv_i = inv_mod(i);
        for (std::uint32_t j = 0; j <= i; ++j) {
            std::uint64_t term = inv_i * C[i][j] % ell * binom_mod(qm * j % ell, k) % ell;
            // (-1)^(j+1)
            if (j % 2 == 0) term = (ell - term) % ell;
            lhs = (lhs + term) % ell;
        }
    }
    std::uint64_t rhs;
    if (k == 0) {
        rhs = 0;
    } else {
        rhs = qm * inv_mod(k) % ell;
        if (k % 2 == 0) rhs = (ell - rhs) % ell;  // (-1)^(k+1)
    }
    return lhs == rhs;
}

}  // namespace ellrank
