#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pisym/process.hpp"
#include "pisym/syntax.hpp"
#include "pisym/unify.hpp"

namespace pisym {

enum class FormulaKind : std::uint8_t {
    True,
    False,
    And,
    Or,
    MatchDia,  ///< <x=y>A
    MatchBox,  ///< [x=y]A
    ActDia,    ///< <tau>A, <x!y>A (and the unsupported free input <x?y>A)
    ActBox,
    OutDia,    ///< <x!(y)>A
    OutBox,
    InDia,     ///< <x?(y)>A
    InBox,
    InDiaL,    ///< <x?(y)>L A
    InBoxL,
    InDiaE,    ///< <x?(y)>E A
    InBoxE,
};

/// Negation-free modal formula. Modalities that bind a name keep their
/// body nameless, like process binders.
class Formula {
public:
    Formula();  // true

    static Formula truth();
    static Formula falsity();
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    /// Folds with true / false as the empty case.
    static Formula conj(const std::vector<Formula>& fs);
    static Formula disj(const std::vector<Formula>& fs);
    static Formula match_dia(Name x, Name y, Formula body);
    static Formula match_box(Name x, Name y, Formula body);
    /// `act` must be Tau, FreeOut or FreeIn.
    static Formula act(bool diamond, Action act, Formula body);
    /// Bound modalities: kind is one of Out*/In*; body is nameless.
    static Formula bound(FormulaKind kind, Name channel, Formula body, std::string hint = {});

    FormulaKind kind() const;
    const Name& lhs_name() const;    // match x; modality channel
    const Name& rhs_name() const;    // match y
    const Action& action() const;    // ActDia/ActBox
    const Formula& body() const;     // unary nodes
    const Formula& lhs() const;      // And/Or
    const Formula& rhs() const;
    const std::string& hint() const;

    std::size_t hash() const;
    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

    struct Node;

private:
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

bool is_bound_modality(FormulaKind k);

/// Parsed formula with named placeholders, as for processes.
struct ParsedFormula {
    Formula formula;
    std::vector<std::string> symbols;
};

ParsedFormula parse_formula(std::string_view text);
Formula encode(const ParsedFormula& f, const Prefix& prefix);
std::string pretty(const Formula& f, const NameEnv& env);
std::string pretty(const Formula& f, const Prefix& prefix);

Formula map_names(const Formula& f, const std::function<Name(const Name&)>& fn);
Formula instantiate(const Formula& body, const Name& n);
Formula abstract(const Formula& f, const Name& n);
Formula apply(const Substitution& theta, const Formula& f);
std::vector<Name> free_names(const Formula& f);
std::uint32_t max_level(const Formula& f);

/// De Morgan dual: swaps diamonds and boxes, and/or, true/false.
Formula dual(const Formula& f);

/// Number of bound input modalities (plain, late and early).
std::size_t fresh_budget(const Formula& f);

/// Modal depth: nesting of modalities.
std::size_t modal_depth(const Formula& f);

bool has_free_input(const Formula& f);

/// In the sublogic characterising late/open bisimilarity?
bool is_lm(const Formula& f);

/// Classical satisfaction with all free names read as distinct
/// constants (nabla levels 1..depth), plus `extra_names` further
/// constants. `extra_names` defaults to fresh_budget(a); `depth`
/// defaults to the largest level in p and a.
/// Throws FreeInputModality.
bool sat_ground(const Process& p, const Formula& a, std::optional<std::uint32_t> extra_names = std::nullopt,
                std::uint32_t depth = 0);

/// Provability of the satisfaction judgment under a quantifier prefix,
/// with no case analysis on names. `distinction` pairs act as
/// inequality hypotheses. Throws FormulaOutsideLM.
bool sat_open(const Process& p, const Formula& a, const Prefix& prefix, const Distinction& distinction = {});

/// Same, with the context given directly: nabla levels 1..depth and
/// the eigenvariables mentioned in p and a.
bool sat_open(const Process& p, const Formula& a, std::uint32_t depth, const Distinction& distinction = {});

}  // namespace pisym
