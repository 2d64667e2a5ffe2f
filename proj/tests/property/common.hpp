#pragma once

#include <vector>

#include "corpus.hpp"
#include "pisym/bisim.hpp"

namespace props {

inline constexpr std::uint64_t kSeed = 424242;
inline constexpr std::uint32_t kFreeNames = 3;

struct Pair {
    pisym::Process p, q;
};

// Random pairs over nabla 1..3: a third unrelated, the rest a process
// and one of its variants.
inline std::vector<Pair> sample_pairs(std::size_t n, std::uint64_t seed, std::size_t max_prefixes = 5) {
    corpus::Rng rng(seed);
    std::vector<Pair> out;
    std::uniform_int_distribution<std::size_t> size(1, max_prefixes);
    std::uniform_int_distribution<int> kind(0, 2);
    while (out.size() < n) {
        pisym::Process p = corpus::random_process(rng, size(rng), kFreeNames);
        pisym::Process q =
            kind(rng) == 0 ? corpus::random_process(rng, size(rng), kFreeNames) : corpus::mutate(rng, p, kFreeNames);
        if (kind(rng) == 0) q = corpus::mutate(rng, q, kFreeNames);
        if (pisym::prefix_count(q) > max_prefixes + 1) continue;
        out.push_back({p, q});
    }
    return out;
}

// Names for a quantifier pattern: bit i set means entry i is forall.
inline std::vector<pisym::Name> pattern_names(unsigned mask, pisym::GoalContext& ctx) {
    std::vector<pisym::Name> names;
    std::uint32_t nablas = 0, eigens = 0;
    for (std::uint32_t i = 0; i < kFreeNames; ++i) {
        if (mask & (1u << i)) names.push_back(pisym::Name::eigen(++eigens, nablas));
        else names.push_back(pisym::Name::nabla(++nablas));
    }
    ctx = {};
    ctx.nabla_depth = nablas;
    ctx.next_eigen = eigens + 1;
    return names;
}

inline pisym::Prefix pattern_prefix(unsigned mask) {
    std::vector<pisym::PrefixEntry> entries;
    const char* ids[] = {"a", "b", "c"};
    for (std::uint32_t i = 0; i < kFreeNames; ++i)
        entries.push_back({mask & (1u << i) ? pisym::Quantifier::Forall : pisym::Quantifier::Nabla, ids[i]});
    return pisym::Prefix(std::move(entries));
}

}  // namespace props
