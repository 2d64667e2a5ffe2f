#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pisym/name.hpp"
#include "pisym/process.hpp"

namespace pisym {

/// Idempotent map from eigenvariable ids to names.
///
/// Keys are eigenvariable ids; values are nabla constants or other
/// eigenvariables (never keys of the same map). Level soundness is the
/// caller's business when building by hand and guaranteed by
/// unify_names/compose.
class Substitution {
public:
    Substitution() = default;

    static Substitution single(const Name& var, const Name& value);

    bool is_identity() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }

    /// Image of one name. Non-eigen names are fixed points.
    Name operator()(const Name& n) const;

    /// Bindings as (variable, value) pairs ordered by variable id.
    /// The variable carries its original ceiling.
    std::vector<std::pair<Name, Name>> bindings() const;

    bool binds(std::uint32_t eigen_id) const { return map_.count(eigen_id) != 0; }

    friend bool operator==(const Substitution& a, const Substitution& b) { return a.map_ == b.map_; }
    friend bool operator!=(const Substitution& a, const Substitution& b) { return !(a == b); }
    friend bool operator<(const Substitution& a, const Substitution& b) { return a.map_ < b.map_; }

    /// Adds or overrides one binding, then restores idempotency.
    void bind(const Name& var, const Name& value);

private:
    struct Entry {
        Name var;
        Name value;
        friend bool operator==(const Entry& a, const Entry& b) { return a.var == b.var && a.value == b.value; }
        friend bool operator<(const Entry& a, const Entry& b) {
            return a.var != b.var ? a.var < b.var : a.value < b.value;
        }
    };
    void normalize();
    std::map<std::uint32_t, Entry> map_;
};

/// Unordered pair set of names that must stay distinct.
class Distinction {
public:
    Distinction() = default;

    /// Adds {a, b}; reflexive pairs are ignored.
    void add(const Name& a, const Name& b);
    bool contains(const Name& a, const Name& b) const;
    bool empty() const { return pairs_.empty(); }
    std::size_t size() const { return pairs_.size(); }

    const std::set<std::pair<Name, Name>>& pairs() const { return pairs_; }

    friend bool operator==(const Distinction& a, const Distinction& b) { return a.pairs_ == b.pairs_; }
    friend bool operator<(const Distinction& a, const Distinction& b) { return a.pairs_ < b.pairs_; }

private:
    std::set<std::pair<Name, Name>> pairs_;
};

/// Most general level-sound unifier of two names, if any.
std::optional<Substitution> unify_names(const Name& a, const Name& b);

/// Substitution that applies `inner` first, then `outer`.
Substitution compose(const Substitution& outer, const Substitution& inner);

/// True when no pair of `d` is identified by `theta`.
bool respects(const Substitution& theta, const Distinction& d);

Name apply(const Substitution& theta, const Name& n);
Action apply(const Substitution& theta, const Action& a);
Process apply(const Substitution& theta, const Process& p);

/// Image of a distinction; pairs collapsing to one name are dropped,
/// so call respects() first when that matters.
Distinction apply(const Substitution& theta, const Distinction& d);

std::string debug_string(const Substitution& theta);

}  // namespace pisym
