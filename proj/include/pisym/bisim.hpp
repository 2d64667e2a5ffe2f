#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pisym/lts.hpp"
#include "pisym/modal.hpp"
#include "pisym/process.hpp"
#include "pisym/syntax.hpp"
#include "pisym/unify.hpp"

namespace pisym {

enum class BisimMode : std::uint8_t {
    Open,       ///< inputs: one matching move for a generic name
    OpenEarly,  ///< open, with the input name fixed before the matching move
    Late,       ///< ground; inputs: one matching move for all case names
    Early,      ///< ground; inputs: a matching move per case name
};

std::string to_string(BisimMode m);
/// "open", "open-early", "late", "early". Throws UsageError.
BisimMode parse_mode(std::string_view s);

enum class Side : std::uint8_t { Left, Right };
inline Side other(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

/// Names in scope for a goal: nabla levels 1..nabla_depth, eigenvariables
/// below next_eigen, and explicit distinction pairs.
struct GoalContext {
    std::uint32_t nabla_depth = 0;
    std::uint32_t next_eigen = 1;
    Distinction distinction;

    static GoalContext from_prefix(const Prefix& prefix, const Distinction& extra = {});
};

/// One move of a refutation game.
struct WitnessStep {
    Side side = Side::Left;             ///< which process moves
    std::size_t transition = 0;         ///< index in successors(mover, depth)
    Action action;                      ///< the move's action
    Substitution theta;                 ///< the move's substitution
    std::size_t candidates = 0;         ///< matching moves of the other process
    std::optional<std::size_t> response;  ///< followed reply: index in successors(other under theta, depth)
    std::optional<Name> instantiation;  ///< name substituted for a bound action's binder
};

struct Witness {
    BisimMode mode = BisimMode::Open;
    Process left, right;
    GoalContext context;
    std::vector<WitnessStep> steps;
    std::optional<Formula> formula;  ///< holds for `formula_side`, fails for the other
    Side formula_side = Side::Left;
};

struct CertificateEntry {
    GoalContext context;
    Process left, right;
};

struct BisimStats {
    std::size_t goals = 0;     ///< distinct goals decided
    std::size_t branches = 0;  ///< moves examined
};

struct BisimOptions {
    std::optional<std::size_t> max_depth;  ///< nesting bound; exceeded -> DepthBudgetExceeded
    bool extract_formula = true;
    bool certificate = true;
};

struct BisimResult {
    bool bisimilar = false;
    std::optional<Witness> witness;
    std::vector<CertificateEntry> certificate;
    BisimStats stats;
};

/// Open bisimilarity under the quantifier structure of `ctx` and its
/// explicit distinction. Throws ReplicationUnsupported.
BisimResult open_bisim(const Process& left, const Process& right, const GoalContext& ctx,
                       const BisimOptions& opts = {});

/// Late / early bisimilarity; every free name must be a nabla constant.
BisimResult late_bisim(const Process& left, const Process& right, std::uint32_t depth = 0,
                       const BisimOptions& opts = {});
BisimResult early_bisim(const Process& left, const Process& right, std::uint32_t depth = 0,
                        const BisimOptions& opts = {});

BisimResult bisim(BisimMode mode, const Process& left, const Process& right, const GoalContext& ctx,
                  const BisimOptions& opts = {});

/// Re-runs a refutation game and checks every recorded move. Throws
/// WitnessMalformed on the first inconsistency.
void replay(const Witness& w);

/// Separating formula of a refutation, recomputed from the game.
/// Throws WitnessMalformed for a bisimilar result or a witness that
/// does not replay; returns nullopt when no formula could be built.
std::optional<Formula> distinguishing_formula(const BisimResult& r);
std::optional<Formula> distinguishing_formula(const Witness& w);

/// Checks a witness formula with the satisfaction relation matching the
/// witness mode: ground for late/early, open otherwise.
bool formula_separates(const Witness& w);

/// Quantifier prefix describing `ctx` restricted to `names`, with
/// identifiers from `env` (invented where missing).
Prefix context_prefix(const GoalContext& ctx, const std::vector<Name>& names, const NameEnv& env);

}  // namespace pisym
