#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pisym/name.hpp"

namespace pisym {

enum class ProcKind : std::uint8_t { Nil, Tau, Out, In, Match, Sum, Par, Nu, Bang };

/// Immutable process term in lambda-tree form.
///
/// Binders (input and restriction) are nameless: their bodies refer to
/// the bound name as `Name::bound(0)`. A binder may carry a hint string
/// used for printing; hints never take part in equality, so structural
/// equality is alpha-equivalence.
class Process {
public:
    Process();  // 0

    static Process nil();
    static Process tau(Process cont);
    static Process out(Name channel, Name object, Process cont);
    static Process in(Name channel, Process body, std::string hint = {});
    static Process match(Name lhs, Name rhs, Process cont);
    static Process sum(Process lhs, Process rhs);
    static Process par(Process lhs, Process rhs);
    static Process nu(Process body, std::string hint = {});
    static Process bang(Process cont);

    ProcKind kind() const;

    /// Out/In channel, Match left-hand side.
    const Name& channel() const;
    /// Out object, Match right-hand side.
    const Name& object() const;
    /// Continuation of Tau/Out/Match/Bang, body of In/Nu.
    const Process& cont() const;
    const Process& lhs() const;
    const Process& rhs() const;
    const std::string& hint() const;

    bool is_nil() const { return kind() == ProcKind::Nil; }
    std::size_t hash() const;

    friend bool operator==(const Process& a, const Process& b);
    friend bool operator!=(const Process& a, const Process& b) { return !(a == b); }

    /// Total order consistent with ==; used to keep outputs deterministic.
    friend bool operator<(const Process& a, const Process& b);

    struct Node;

private:
    explicit Process(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct ProcessHash {
    std::size_t operator()(const Process& p) const { return p.hash(); }
};

enum class ActionKind : std::uint8_t { Tau, FreeOut, FreeIn, BoundOut, BoundIn };

/// Transition label. Bound actions carry no object: the bound name is
/// the binder of the continuation they are paired with.
struct Action {
    ActionKind kind = ActionKind::Tau;
    Name channel{};
    Name object{};

    static Action tau() { return {}; }
    static Action free_out(Name ch, Name obj) { return {ActionKind::FreeOut, ch, obj}; }
    static Action free_in(Name ch, Name obj) { return {ActionKind::FreeIn, ch, obj}; }
    static Action bound_out(Name ch) { return {ActionKind::BoundOut, ch, {}}; }
    static Action bound_in(Name ch) { return {ActionKind::BoundIn, ch, {}}; }

    bool is_bound() const { return kind == ActionKind::BoundOut || kind == ActionKind::BoundIn; }
    bool has_object() const { return kind == ActionKind::FreeOut || kind == ActionKind::FreeIn; }

    friend bool operator==(const Action& a, const Action& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == ActionKind::Tau) return true;
        if (a.channel != b.channel) return false;
        return !a.has_object() || a.object == b.object;
    }
    friend bool operator!=(const Action& a, const Action& b) { return !(a == b); }
};

// -- structural operations -------------------------------------------------

/// Alpha-equivalence. With nameless binders this is structural equality.
bool alpha_eq(const Process& p, const Process& q);

/// Sorted, duplicate-free list of the non-bound names occurring in `p`.
std::vector<Name> free_names(const Process& p);

/// Applies `f` to every non-bound name, leaving binders untouched.
Process map_names(const Process& p, const std::function<Name(const Name&)>& f);

/// Replaces the outermost loose bound name of `body` by `n`.
Process instantiate(const Process& body, const Name& n);

/// Inverse of instantiate: turns every occurrence of `n` into the loose
/// bound name of a new binder, shifting existing loose indices up.
Process abstract(const Process& p, const Name& n);

/// Adds `amount` to every bound index >= `cutoff` (relative to depth).
Process shift(const Process& p, std::uint32_t amount, std::uint32_t cutoff = 0);

/// Number of tau, input and output prefixes.
std::size_t prefix_count(const Process& p);

/// Number of constructors.
std::size_t size(const Process& p);

bool contains_bang(const Process& p);

/// Largest nabla level or eigenvariable ceiling mentioned in `p`.
std::uint32_t max_level(const Process& p);

/// Largest eigenvariable id mentioned in `p` (0 when none).
std::uint32_t max_eigen_id(const Process& p);

/// Compact unambiguous rendering used in diagnostics and tests.
std::string debug_string(const Process& p);
std::string debug_string(const Action& a);

}  // namespace pisym
