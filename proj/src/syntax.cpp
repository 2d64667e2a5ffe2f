#include "pisym/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "lexer.hpp"
#include "pisym/errors.hpp"

namespace pisym {

using detail::Lexer;
using detail::Tok;

// -- named intermediate tree ---------------------------------------------

namespace {

enum class SynKind { Nil, Tau, Out, BoundOut, In, Match, Sum, Par, Nu, Bang, Call };

struct Syn {
    SynKind kind = SynKind::Nil;
    std::string a, b;  // channel/object, match sides, binder name
    std::shared_ptr<const Syn> l, r;
    std::shared_ptr<const Declarations::Decl> decl;
    std::vector<std::string> args;
    std::size_t pos = 0;
};

using SynPtr = std::shared_ptr<const Syn>;

bool is_keyword(const std::string& s) { return s == "tau" || s == "nu"; }

}  // namespace

struct Declarations::Decl {
    std::string name;
    std::vector<std::string> params;
    SynPtr body;
};

namespace {

SynPtr make(SynKind k, std::size_t pos, std::string a = {}, std::string b = {}, SynPtr l = {}, SynPtr r = {}) {
    auto s = std::make_shared<Syn>();
    s->kind = k;
    s->pos = pos;
    s->a = std::move(a);
    s->b = std::move(b);
    s->l = std::move(l);
    s->r = std::move(r);
    return s;
}

class ProcParser {
public:
    ProcParser(Lexer& lx, const Declarations& defs) : lx_(lx), defs_(defs) {}

    SynPtr proc() {
        SynPtr lhs = par();
        if (lx_.at("+")) {
            std::size_t pos = lx_.next().pos;
            return make(SynKind::Sum, pos, {}, {}, lhs, proc());
        }
        return lhs;
    }

    std::string name() {
        const auto& t = lx_.peek();
        if (t.kind != Tok::Ident || !detail::is_name(t.text) || is_keyword(t.text)) lx_.fail({"name"});
        return lx_.next().text;
    }

private:
    SynPtr par() {
        SynPtr lhs = unary();
        if (lx_.at("|")) {
            std::size_t pos = lx_.next().pos;
            return make(SynKind::Par, pos, {}, {}, lhs, par());
        }
        return lhs;
    }

    // optional ".P" continuation of a prefix
    SynPtr tail() {
        if (lx_.accept(".")) return unary();
        return make(SynKind::Nil, lx_.peek().pos);
    }

    SynPtr unary() {
        const auto t = lx_.peek();
        if (t.kind == Tok::Zero) {
            lx_.next();
            return make(SynKind::Nil, t.pos);
        }
        if (t.kind == Tok::Punct) {
            if (t.text == "(") {
                lx_.next();
                if (lx_.at_ident("nu")) {
                    lx_.next();
                    std::string x = name();
                    lx_.expect(")");
                    return make(SynKind::Nu, t.pos, x, {}, unary());
                }
                SynPtr inner = proc();
                lx_.expect(")");
                return inner;
            }
            if (t.text == "[") {
                lx_.next();
                std::string x = name();
                lx_.expect("=");
                std::string y = name();
                lx_.expect("]");
                return make(SynKind::Match, t.pos, x, y, unary());
            }
            if (t.text == "!") {
                lx_.next();
                return make(SynKind::Bang, t.pos, {}, {}, unary());
            }
            lx_.fail({"0", "tau", "name", "(", "[", "!"});
        }
        if (t.kind != Tok::Ident) lx_.fail({"0", "tau", "name", "(", "[", "!"});
        if (t.text == "tau") {
            lx_.next();
            return make(SynKind::Tau, t.pos, {}, {}, tail());
        }
        if (is_keyword(t.text)) lx_.fail({"name"});
        const bool upper = !detail::is_name(t.text);
        if (upper || (lx_.peek(1).kind == Tok::Punct && lx_.peek(1).text == "(")) return call();

        std::string x = name();
        if (lx_.accept("!")) {
            if (lx_.peek().kind == Tok::Ident && detail::is_name(lx_.peek().text) && !is_keyword(lx_.peek().text)) {
                std::string y = name();
                return make(SynKind::Out, t.pos, x, y, tail());
            }
            if (lx_.accept("(")) {
                std::string y = name();
                lx_.expect(")");
                return make(SynKind::BoundOut, t.pos, x, y, tail());
            }
            return make(SynKind::Out, t.pos, x, std::string(kReservedName), tail());
        }
        if (lx_.accept("?")) {
            lx_.expect("(");
            std::string y = name();
            lx_.expect(")");
            return make(SynKind::In, t.pos, x, y, tail());
        }
        // `x.P`: input whose binder is never used
        return make(SynKind::In, t.pos, x, {}, tail());
    }

    SynPtr call() {
        const auto t = lx_.next();
        auto decl = defs_.find(t.text);
        if (!decl) throw SyntaxError(t.pos, {}, "unknown declaration '" + t.text + "'");
        auto s = std::make_shared<Syn>();
        s->kind = SynKind::Call;
        s->pos = t.pos;
        s->a = t.text;
        if (lx_.accept("(")) {
            if (!lx_.at(")")) {
                s->args.push_back(name());
                while (lx_.accept(",")) s->args.push_back(name());
            }
            lx_.expect(")");
        }
        if (s->args.size() != decl->params.size())
            throw SyntaxError(t.pos, {}, "'" + t.text + "' expects " + std::to_string(decl->params.size()) +
                                             " argument(s), got " + std::to_string(s->args.size()));
        s->decl = std::move(decl);
        return s;
    }

    Lexer& lx_;
    const Declarations& defs_;
};

// -- named tree -> nameless process ---------------------------------------

struct Scope {
    std::vector<std::string> binders;  // innermost last
    const std::map<std::string, Name>* params = nullptr;
};

class Converter {
public:
    std::vector<std::string> symbols;

    Process convert(const Syn& s, Scope& sc) {
        switch (s.kind) {
        case SynKind::Nil:
            return Process::nil();
        case SynKind::Tau:
            return Process::tau(convert(*s.l, sc));
        case SynKind::Out: {
            Name a = resolve(s.a, sc), b = resolve(s.b, sc);
            return Process::out(a, b, convert(*s.l, sc));
        }
        case SynKind::BoundOut: {
            // x!(y).P is (nu y)x!y.P
            sc.binders.push_back(s.b);
            Name a = resolve(s.a, sc), b = resolve(s.b, sc);
            Process body = Process::out(a, b, convert(*s.l, sc));
            sc.binders.pop_back();
            return Process::nu(std::move(body), s.b);
        }
        case SynKind::In: {
            Name a = resolve(s.a, sc);
            // an unnamed binder can never be referenced
            sc.binders.push_back(s.b.empty() ? std::string("\x01") : s.b);
            Process body = convert(*s.l, sc);
            sc.binders.pop_back();
            return Process::in(a, std::move(body), s.b);
        }
        case SynKind::Match: {
            Name a = resolve(s.a, sc), b = resolve(s.b, sc);
            return Process::match(a, b, convert(*s.l, sc));
        }
        case SynKind::Sum:
            return Process::sum(convert(*s.l, sc), convert(*s.r, sc));
        case SynKind::Par:
            return Process::par(convert(*s.l, sc), convert(*s.r, sc));
        case SynKind::Nu: {
            sc.binders.push_back(s.a);
            Process body = convert(*s.l, sc);
            sc.binders.pop_back();
            return Process::nu(std::move(body), s.a);
        }
        case SynKind::Bang:
            return Process::bang(convert(*s.l, sc));
        case SynKind::Call: {
            const auto& d = *s.decl;
            // Arguments are resolved at the call site; bound ones are
            // shifted by the body's own binders on lookup.
            std::map<std::string, Name> args;
            for (std::size_t i = 0; i < d.params.size(); ++i) args[d.params[i]] = resolve(s.args[i], sc);
            Scope inner;
            inner.params = &args;
            return convert(*d.body, inner);
        }
        }
        throw InternalError("unknown syntax node");
    }

private:
    Name resolve(const std::string& ident, const Scope& sc) {
        const auto n = static_cast<std::uint32_t>(sc.binders.size());
        for (std::uint32_t i = 0; i < n; ++i)
            if (sc.binders[n - 1 - i] == ident) return Name::bound(i);
        if (sc.params) {
            auto it = sc.params->find(ident);
            if (it != sc.params->end()) {
                Name v = it->second;
                if (v.is_bound()) v = Name::bound(v.index + n);
                return v;
            }
        }
        auto it = std::find(symbols.begin(), symbols.end(), ident);
        if (it != symbols.end()) return Name::free(static_cast<std::uint32_t>(it - symbols.begin()));
        symbols.push_back(ident);
        return Name::free(static_cast<std::uint32_t>(symbols.size() - 1));
    }
};

}  // namespace

// -- Declarations -----------------------------------------------------------

Declarations::Declarations() = default;
Declarations::~Declarations() = default;
Declarations::Declarations(const Declarations&) = default;
Declarations& Declarations::operator=(const Declarations&) = default;
Declarations::Declarations(Declarations&&) noexcept = default;
Declarations& Declarations::operator=(Declarations&&) noexcept = default;

std::shared_ptr<const Declarations::Decl> Declarations::find(std::string_view ident) const {
    auto it = decls_.find(ident);
    return it == decls_.end() ? nullptr : it->second;
}

bool Declarations::contains(std::string_view ident) const { return find(ident) != nullptr; }
std::size_t Declarations::size() const { return decls_.size(); }

void Declarations::add(std::string_view line) {
    Lexer lx(line);
    const auto t = lx.next();
    if (t.kind != Tok::Ident || is_keyword(t.text) || t.text == kReservedName)
        throw SyntaxError(t.pos, {"identifier"}, "declaration must start with an identifier");
    if (decls_.count(t.text)) throw SyntaxError(t.pos, {}, "'" + t.text + "' is already declared");
    auto d = std::make_shared<Decl>();
    d->name = t.text;
    lx.expect("(");
    ProcParser pp(lx, *this);
    if (!lx.at(")")) {
        d->params.push_back(pp.name());
        while (lx.accept(",")) d->params.push_back(pp.name());
    }
    lx.expect(")");
    std::set<std::string> seen;
    for (const auto& p : d->params)
        if (!seen.insert(p).second) throw SyntaxError(t.pos, {}, "parameter '" + p + "' repeated");
    lx.expect(":=");
    d->body = pp.proc();
    if (lx.peek().kind != Tok::End) lx.fail({"end of declaration"});
    decls_.emplace(d->name, std::move(d));
}

Declarations Declarations::parse(std::string_view text) {
    Declarations out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        bool blank = std::all_of(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
        if (!blank) {
            try {
                out.add(line);
            } catch (const SyntaxError& e) {
                throw SyntaxError(start + e.position(), e.expected(), e.detail());
            }
        }
        start = end + 1;
    }
    return out;
}

// -- parse_process ------------------------------------------------------------

bool ParsedProcess::mentions(std::string_view symbol) const {
    return std::find(symbols.begin(), symbols.end(), symbol) != symbols.end();
}

ParsedProcess parse_process(std::string_view text, const Declarations& defs) {
    Lexer lx(text);
    ProcParser pp(lx, defs);
    SynPtr tree = pp.proc();
    if (lx.peek().kind != Tok::End) lx.fail({"+", "|", "end of input"});
    Converter conv;
    Scope sc;
    ParsedProcess out;
    Process raw = conv.convert(*tree, sc);
    // unused declaration arguments were interned too; keep only symbols
    // that survive, in order of first interning
    std::vector<std::uint32_t> remap(conv.symbols.size(), UINT32_MAX);
    for (const Name& n : free_names(raw)) remap[n.index] = 0;
    for (std::size_t i = 0; i < remap.size(); ++i) {
        if (remap[i] == UINT32_MAX) continue;
        remap[i] = static_cast<std::uint32_t>(out.symbols.size());
        out.symbols.push_back(conv.symbols[i]);
    }
    out.proc = map_names(raw, [&](const Name& n) { return Name::free(remap[n.index]); });
    return out;
}

// -- Prefix -------------------------------------------------------------------

Prefix::Prefix(std::vector<PrefixEntry> entries) : entries_(std::move(entries)) {
    std::set<std::string> seen;
    for (const auto& e : entries_)
        if (!seen.insert(e.name).second) throw DuplicatePrefixName(e.name);
}

Prefix Prefix::parse(std::string_view text) {
    Lexer lx(text);
    std::vector<PrefixEntry> entries;
    if (lx.peek().kind == Tok::End) return Prefix{};
    do {
        Quantifier q;
        if (lx.at_ident("forall"))
            q = Quantifier::Forall;
        else if (lx.at_ident("nabla"))
            q = Quantifier::Nabla;
        else
            lx.fail({"forall", "nabla"});
        lx.next();
        const auto& t = lx.peek();
        if (t.kind != Tok::Ident || !detail::is_name(t.text) || is_keyword(t.text)) lx.fail({"name"});
        entries.push_back({q, lx.next().text});
    } while (lx.accept(","));
    if (lx.peek().kind != Tok::End) lx.fail({",", "end of input"});
    return Prefix(std::move(entries));
}

Prefix Prefix::all_nabla(const std::vector<std::string>& names) {
    std::vector<PrefixEntry> entries;
    for (const auto& n : names) entries.push_back({Quantifier::Nabla, n});
    return Prefix(std::move(entries));
}

bool Prefix::contains(std::string_view name) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const PrefixEntry& e) { return e.name == name; });
}

std::uint32_t Prefix::nabla_count() const {
    return static_cast<std::uint32_t>(std::count_if(entries_.begin(), entries_.end(),
                                                    [](const PrefixEntry& e) { return e.quantifier == Quantifier::Nabla; }));
}

std::uint32_t Prefix::forall_count() const {
    return static_cast<std::uint32_t>(entries_.size()) - nabla_count();
}

std::vector<Name> Prefix::names() const {
    std::vector<Name> out;
    std::uint32_t level = 0, id = 0;
    for (const auto& e : entries_) {
        if (e.quantifier == Quantifier::Nabla)
            out.push_back(Name::nabla(++level));
        else
            out.push_back(Name::eigen(++id, level));
    }
    return out;
}

Prefix Prefix::with_reserved() const {
    if (contains(kReservedName)) return *this;
    std::vector<PrefixEntry> entries{{Quantifier::Nabla, std::string(kReservedName)}};
    entries.insert(entries.end(), entries_.begin(), entries_.end());
    return Prefix(std::move(entries));
}

std::string Prefix::str() const {
    std::string s;
    for (const auto& e : entries_) {
        if (!s.empty()) s += ", ";
        s += e.quantifier == Quantifier::Nabla ? "nabla " : "forall ";
        s += e.name;
    }
    return s;
}

// -- NameEnv ------------------------------------------------------------------

NameEnv::NameEnv(const Prefix& prefix) {
    const auto names = prefix.names();
    for (std::size_t i = 0; i < names.size(); ++i) bind(prefix.entries()[i].name, names[i]);
}

std::optional<Name> NameEnv::find(std::string_view ident) const {
    auto it = idents_.find(ident);
    if (it == idents_.end()) return std::nullopt;
    return it->second;
}

Name NameEnv::lookup(std::string_view ident) const {
    if (auto n = find(ident)) return *n;
    throw UnboundName(std::string(ident));
}

bool NameEnv::taken(std::string_view ident) const { return idents_.count(ident) != 0; }

void NameEnv::bind(const std::string& ident, const Name& n) {
    if (auto old = names_.find(n); old != names_.end()) idents_.erase(old->second);
    if (auto clash = idents_.find(ident); clash != idents_.end()) names_.erase(clash->second);
    names_[n] = ident;
    idents_[ident] = n;
}

std::string NameEnv::invent(const Name& n) const {
    std::string base;
    switch (n.kind) {
    case NameKind::Nabla: base = "n" + std::to_string(n.index); break;
    case NameKind::Eigen: base = "e" + std::to_string(n.index); break;
    case NameKind::Free: base = "f" + std::to_string(n.index); break;
    case NameKind::Bound: base = "b" + std::to_string(n.index); break;
    }
    std::string s = base;
    for (int k = 1; taken(s); ++k) s = base + "_" + std::to_string(k);
    return s;
}

std::string NameEnv::name_of(const Name& n) const {
    auto it = names_.find(n);
    if (it != names_.end()) return it->second;
    std::string s = invent(n);
    names_[n] = s;
    idents_[s] = n;
    return s;
}

std::string fresh_ident(std::string_view hint, const NameEnv& env, const std::vector<std::string>& avoid) {
    std::string base(hint);
    if (base.empty() || !detail::is_name(base) || base == kReservedName || is_keyword(base)) base = "y";
    auto used = [&](const std::string& s) {
        return env.taken(s) || std::find(avoid.begin(), avoid.end(), s) != avoid.end();
    };
    std::string s = base;
    for (int k = 1; used(s); ++k) s = base + std::to_string(k);
    return s;
}

// -- encode -------------------------------------------------------------------

Process encode(const ParsedProcess& p, const Prefix& prefix) {
    NameEnv env(prefix);
    std::vector<Name> table;
    table.reserve(p.symbols.size());
    for (const auto& s : p.symbols) table.push_back(env.lookup(s));
    return map_names(p.proc, [&](const Name& n) { return n.is_free() ? table.at(n.index) : n; });
}

// -- pretty -------------------------------------------------------------------

namespace {

class Printer {
public:
    explicit Printer(const NameEnv& env) : env_(env) {}

    std::string sum(const Process& p) {
        if (p.kind() == ProcKind::Sum) return par(p.lhs()) + " + " + sum(p.rhs());
        return par(p);
    }

    std::string par(const Process& p) {
        if (p.kind() == ProcKind::Par) return unary(p.lhs()) + " | " + par(p.rhs());
        if (p.kind() == ProcKind::Sum) return "(" + sum(p) + ")";
        return unary(p);
    }

    std::string unary(const Process& p) {
        switch (p.kind()) {
        case ProcKind::Nil:
            return "0";
        case ProcKind::Tau:
            return "tau." + unary(p.cont());
        case ProcKind::Out:
            if (!p.object().is_bound() && name(p.object()) == kReservedName)
                return name(p.channel()) + "!." + unary(p.cont());
            return name(p.channel()) + "!" + name(p.object()) + "." + unary(p.cont());
        case ProcKind::In: {
            std::string ch = name(p.channel());
            std::string y = bind(p.hint());
            std::string body = unary(p.cont());
            stack_.pop_back();
            return ch + "?(" + y + ")." + body;
        }
        case ProcKind::Match:
            return "[" + name(p.channel()) + "=" + name(p.object()) + "]" + unary(p.cont());
        case ProcKind::Nu: {
            const Process& b = p.cont();
            // (nu y)x!y.P prints as x!(y).P
            if (b.kind() == ProcKind::Out && b.object() == Name::bound(0) && b.channel() != Name::bound(0)) {
                std::string y = bind(p.hint());
                std::string ch = name(b.channel());
                std::string body = unary(b.cont());
                stack_.pop_back();
                return ch + "!(" + y + ")." + body;
            }
            std::string y = bind(p.hint());
            std::string body = unary(b);
            stack_.pop_back();
            return "(nu " + y + ")" + body;
        }
        case ProcKind::Bang:
            return "!" + unary(p.cont());
        case ProcKind::Sum:
        case ProcKind::Par:
            return "(" + sum(p) + ")";
        }
        return "?";
    }

private:
    std::string name(const Name& n) {
        if (n.is_bound()) {
            if (n.index >= stack_.size()) throw InternalError("dangling bound name in pretty");
            return stack_[stack_.size() - 1 - n.index];
        }
        return env_.name_of(n);
    }

    std::string bind(const std::string& hint) {
        stack_.push_back(fresh_ident(hint, env_, stack_));
        return stack_.back();
    }

    const NameEnv& env_;
    std::vector<std::string> stack_;
};

}  // namespace

std::string pretty(const Process& p, const NameEnv& env) {
    for (const Name& n : free_names(p)) env.name_of(n);  // fix names before choosing binders
    return Printer(env).sum(p);
}

std::string pretty(const Process& p, const Prefix& prefix) { return pretty(p, NameEnv(prefix)); }

std::string pretty(const Name& n, const NameEnv& env) { return env.name_of(n); }

std::string pretty(const Action& a, const NameEnv& env, std::string_view binder) {
    switch (a.kind) {
    case ActionKind::Tau:
        return "tau";
    case ActionKind::FreeOut:
        return env.name_of(a.channel) + "!" + env.name_of(a.object);
    case ActionKind::FreeIn:
        return env.name_of(a.channel) + "?" + env.name_of(a.object);
    case ActionKind::BoundOut:
        return env.name_of(a.channel) + "!(" + std::string(binder) + ")";
    case ActionKind::BoundIn:
        return env.name_of(a.channel) + "?(" + std::string(binder) + ")";
    }
    return "?";
}

}  // namespace pisym
