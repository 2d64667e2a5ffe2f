#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pisym/process.hpp"
#include "pisym/syntax.hpp"
#include "pisym/unify.hpp"

namespace pisym {

/// One symbolic step: under `theta`, the source does `action` and
/// becomes `cont`. For bound actions `cont` is the body of the
/// continuation abstraction: its loose `Name::bound(0)` is the bound name.
struct Transition {
    Substitution theta;
    Action action;
    Process cont;

    friend bool operator==(const Transition& a, const Transition& b) {
        return a.theta == b.theta && a.action == b.action && a.cont == b.cont;
    }
};

using SuccessorSet = std::vector<Transition>;

/// Most general unifier making an observed action equal to a wanted
/// one (channels, and objects of free actions).
std::optional<Substitution> unify_actions(const Action& seen, const Action& want);

/// Nabla depth a term lives at: the largest level or ceiling it mentions.
inline std::uint32_t depth_of(const Process& p) { return max_level(p); }

/// Every symbolic transition, free and bound, in clause order.
/// `depth` must be at least depth_of(p); fresh levels go above it.
SuccessorSet successors(const Process& p, std::uint32_t depth);
SuccessorSet successors(const Process& p);

SuccessorSet successors_free(const Process& p);
SuccessorSet successors_bound(const Process& p);

bool has_no_transition(const Process& p);

/// Reachable states of a process with no eigenvariables. Bound-action
/// edges lead to the continuation opened at the next nabla level.
struct LtsGraph {
    struct Edge {
        std::size_t from;
        std::size_t to;
        Substitution theta;
        Action action;
        /// For bound actions: the level the bound name was opened at.
        Name bound_name;
    };
    std::vector<Process> states;
    std::vector<Edge> edges;
};

/// BFS closure from `p`. Throws StateBudgetExceeded past `max_states`.
LtsGraph lts_graph(const Process& p, std::size_t max_states);

/// Graphviz rendering: node label = pretty(state), edge label = "action ; theta".
std::string to_dot(const LtsGraph& g, const NameEnv& env);

/// "{x:=y}" style rendering of a substitution.
std::string pretty(const Substitution& theta, const NameEnv& env);

}  // namespace pisym
