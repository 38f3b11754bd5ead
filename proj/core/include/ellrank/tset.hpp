#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ellrank {

// The subset T of Z/gamma Z from the congruence test: 1 is always a member,
// 0 never is; membership for n in {2..gamma-1} is decided by the ell-th-power
// test on h_n.
struct TSet {
    std::uint32_t gamma = 0;
    std::vector<bool> member;  // size gamma

    static TSet trivial(std::uint32_t gamma);  // {1}
    static TSet from_members(std::uint32_t gamma, const std::vector<std::uint32_t>& ns);
    static TSet parse(std::uint32_t gamma, const std::string& csv);  // "1,3,4"

    bool contains(std::uint32_t n) const { return n < gamma && member[n]; }
    std::size_t size() const;
    std::vector<std::uint32_t> members() const;
    std::string to_string() const;  // "[1,3,4]"

    friend bool operator==(const TSet& a, const TSet& b) { return a.gamma == b.gamma && a.member == b.member; }

    // T \ {1} closed under n -> 1-n mod gamma; realizable sets always are.
    bool closed_under_reflection() const;
};

}  // namespace ellrank
