#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace pisym {

enum class NameKind : std::uint8_t {
    Bound,  ///< de Bruijn index toward the nearest enclosing binder
    Nabla,  ///< locally scoped constant, identified by its level (1-based)
    Eigen,  ///< instantiable variable; may only become a nabla at or below its ceiling
    Free,   ///< named placeholder produced by the parser, removed by encode
};

/// One name occurrence.
///
/// `index` is the de Bruijn index, nabla level, eigenvariable id or
/// placeholder symbol depending on `kind`. `ceiling` is meaningful for
/// eigenvariables only: the number of nabla levels the variable may
/// depend on (raising over the local signature in force when it was
/// introduced).
struct Name {
    NameKind kind = NameKind::Bound;
    std::uint32_t index = 0;
    std::uint32_t ceiling = 0;

    static constexpr Name bound(std::uint32_t i) { return {NameKind::Bound, i, 0}; }
    static constexpr Name nabla(std::uint32_t level) { return {NameKind::Nabla, level, 0}; }
    static constexpr Name eigen(std::uint32_t id, std::uint32_t ceiling) {
        return {NameKind::Eigen, id, ceiling};
    }
    static constexpr Name free(std::uint32_t symbol) { return {NameKind::Free, symbol, 0}; }

    constexpr bool is_bound() const { return kind == NameKind::Bound; }
    constexpr bool is_nabla() const { return kind == NameKind::Nabla; }
    constexpr bool is_eigen() const { return kind == NameKind::Eigen; }
    constexpr bool is_free() const { return kind == NameKind::Free; }

    /// Same name, ignoring the ceiling of eigenvariables (ids are unique).
    constexpr bool same(const Name& o) const { return kind == o.kind && index == o.index; }

    friend constexpr bool operator==(const Name& a, const Name& b) { return a.same(b); }
    friend constexpr std::strong_ordering operator<=>(const Name& a, const Name& b) {
        if (auto c = a.kind <=> b.kind; c != 0) return c;
        return a.index <=> b.index;
    }

    std::size_t hash() const {
        return (static_cast<std::size_t>(kind) << 56) ^ (static_cast<std::size_t>(index) * 0x9E3779B97F4A7C15ULL);
    }
};

/// Debug rendering: `#i`, `n<level>`, `E<id>^<ceiling>`, `?<symbol>`.
std::string debug_string(const Name& n);

struct NameHash {
    std::size_t operator()(const Name& n) const { return n.hash(); }
};

}  // namespace pisym
