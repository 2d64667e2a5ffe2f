#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pisym/name.hpp"
#include "pisym/process.hpp"

namespace pisym {

/// Reserved constant used by the `x!.P` abbreviation.
inline constexpr std::string_view kReservedName = "_a";

/// Result of parsing: free names are `Name::free(i)` placeholders
/// indexing `symbols`.
struct ParsedProcess {
    Process proc;
    std::vector<std::string> symbols;

    bool mentions(std::string_view symbol) const;
};

enum class Quantifier : std::uint8_t { Forall, Nabla };

struct PrefixEntry {
    Quantifier quantifier;
    std::string name;
};

/// Ordered quantifier prefix, leftmost outermost.
class Prefix {
public:
    Prefix() = default;
    explicit Prefix(std::vector<PrefixEntry> entries);

    /// "forall x, nabla y"; the empty string is the empty prefix.
    static Prefix parse(std::string_view text);
    static Prefix all_nabla(const std::vector<std::string>& names);

    const std::vector<PrefixEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    bool contains(std::string_view name) const;
    std::uint32_t nabla_count() const;
    std::uint32_t forall_count() const;

    /// Encoded name of each entry, in order.
    std::vector<Name> names() const;

    /// Copy with `nabla _a` in front, unless `_a` is already declared.
    Prefix with_reserved() const;

    std::string str() const;

private:
    std::vector<PrefixEntry> entries_;
};

/// Bidirectional map between identifiers and encoded names. Names with
/// no identifier get generated ones (`n3`, `e2`) that avoid clashes.
class NameEnv {
public:
    NameEnv() = default;
    explicit NameEnv(const Prefix& prefix);

    std::optional<Name> find(std::string_view ident) const;
    /// Throws UnboundName.
    Name lookup(std::string_view ident) const;

    /// Identifier for `n`, inventing and remembering one if needed.
    std::string name_of(const Name& n) const;

    /// Associates `ident` with `n` (replaces any earlier association of `n`).
    void bind(const std::string& ident, const Name& n);

    /// Is `ident` in use for some name?
    bool taken(std::string_view ident) const;

private:
    std::string invent(const Name& n) const;
    mutable std::map<Name, std::string> names_;
    mutable std::map<std::string, Name, std::less<>> idents_;
};

/// Non-recursive process abbreviations: `Ident(params) := proc`.
class Declarations {
public:
    struct Decl;

    Declarations();
    ~Declarations();
    Declarations(const Declarations&);
    Declarations& operator=(const Declarations&);
    Declarations(Declarations&&) noexcept;
    Declarations& operator=(Declarations&&) noexcept;

    /// One `Ident(params) := proc` line. Later bodies may call earlier ones.
    void add(std::string_view line);

    /// A whole file: one declaration per line, `#` comments, blank lines.
    static Declarations parse(std::string_view text);

    bool contains(std::string_view ident) const;
    std::size_t size() const;

    std::shared_ptr<const Decl> find(std::string_view ident) const;

private:
    std::map<std::string, std::shared_ptr<const Decl>, std::less<>> decls_;
};

/// Surface grammar, see README. Throws SyntaxError.
ParsedProcess parse_process(std::string_view text, const Declarations& defs = {});

/// Replaces free placeholders by prefix names. Throws UnboundName and
/// DuplicatePrefixName.
Process encode(const ParsedProcess& p, const Prefix& prefix);

/// Surface rendering; `encode(parse_process(pretty(p, env)), prefix)`
/// gives back `p` when `env` was built from `prefix`.
std::string pretty(const Process& p, const NameEnv& env);
std::string pretty(const Process& p, const Prefix& prefix);
std::string pretty(const Name& n, const NameEnv& env);
/// Bound actions print their binder as `binder`.
std::string pretty(const Action& a, const NameEnv& env, std::string_view binder = "y");

/// Picks a binder identifier close to `hint` that is not taken in
/// `env` and not in `avoid`.
std::string fresh_ident(std::string_view hint, const NameEnv& env, const std::vector<std::string>& avoid = {});

}  // namespace pisym
