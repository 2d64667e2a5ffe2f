#include "pisym/modal.hpp"

#include <algorithm>
#include <set>

#include "lexer.hpp"
#include "pisym/errors.hpp"
#include "pisym/lts.hpp"

namespace pisym {

using detail::Lexer;
using detail::Tok;

struct Formula::Node {
    FormulaKind kind = FormulaKind::True;
    Name a{}, b{};
    Action act{};
    Formula l, r;
    std::string hint;
    std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)); }

const Formula::Node& empty_node() {
    static const Formula::Node n;
    return n;
}

constexpr std::size_t kTrueHash = 0x7a11;

}  // namespace

Formula::Formula() = default;

namespace {

std::shared_ptr<const Formula::Node> finish(std::shared_ptr<Formula::Node> n) {
    std::size_t h = static_cast<std::size_t>(n->kind) * 0x100000001b3ULL;
    h = mix(h, n->a.hash());
    h = mix(h, n->b.hash());
    h = mix(h, static_cast<std::size_t>(n->act.kind));
    h = mix(h, n->act.channel.hash());
    h = mix(h, n->act.object.hash());
    h = mix(h, n->l.hash());
    h = mix(h, n->r.hash());
    n->hash = h;
    return n;
}

}  // namespace

Formula Formula::truth() { return Formula(); }

Formula Formula::falsity() {
    auto n = std::make_shared<Node>();
    n->kind = FormulaKind::False;
    return Formula(finish(n));
}

Formula Formula::conj(Formula a, Formula b) {
    auto n = std::make_shared<Node>();
    n->kind = FormulaKind::And;
    n->l = std::move(a);
    n->r = std::move(b);
    return Formula(finish(n));
}

Formula Formula::disj(Formula a, Formula b) {
    auto n = std::make_shared<Node>();
    n->kind = FormulaKind::Or;
    n->l = std::move(a);
    n->r = std::move(b);
    return Formula(finish(n));
}

Formula Formula::conj(const std::vector<Formula>& fs) {
    if (fs.empty()) return truth();
    Formula out = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;) out = conj(fs[i], out);
    return out;
}

Formula Formula::disj(const std::vector<Formula>& fs) {
    if (fs.empty()) return falsity();
    Formula out = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;) out = disj(fs[i], out);
    return out;
}

Formula Formula::match_dia(Name x, Name y, Formula body) {
    auto n = std::make_shared<Node>();
    n->kind = FormulaKind::MatchDia;
    n->a = x;
    n->b = y;
    n->l = std::move(body);
    return Formula(finish(n));
}

Formula Formula::match_box(Name x, Name y, Formula body) {
    auto n = std::make_shared<Node>();
    n->kind = FormulaKind::MatchBox;
    n->a = x;
    n->b = y;
    n->l = std::move(body);
    return Formula(finish(n));
}

Formula Formula::act(bool diamond, Action act, Formula body) {
    if (act.is_bound()) throw InternalError("free modality with a bound action");
    auto n = std::make_shared<Node>();
    n->kind = diamond ? FormulaKind::ActDia : FormulaKind::ActBox;
    n->act = act;
    if (act.kind == ActionKind::Tau) n->act = Action::tau();
    n->l = std::move(body);
    return Formula(finish(n));
}

Formula Formula::bound(FormulaKind kind, Name channel, Formula body, std::string hint) {
    if (!is_bound_modality(kind)) throw InternalError("not a binding modality");
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->a = channel;
    n->l = std::move(body);
    n->hint = std::move(hint);
    return Formula(finish(n));
}

FormulaKind Formula::kind() const { return node_ ? node_->kind : FormulaKind::True; }
const Name& Formula::lhs_name() const { return (node_ ? *node_ : empty_node()).a; }
const Name& Formula::rhs_name() const { return (node_ ? *node_ : empty_node()).b; }
const Action& Formula::action() const { return (node_ ? *node_ : empty_node()).act; }
const Formula& Formula::body() const { return (node_ ? *node_ : empty_node()).l; }
const Formula& Formula::lhs() const { return (node_ ? *node_ : empty_node()).l; }
const Formula& Formula::rhs() const { return (node_ ? *node_ : empty_node()).r; }
const std::string& Formula::hint() const { return (node_ ? *node_ : empty_node()).hint; }
std::size_t Formula::hash() const { return node_ ? node_->hash : kTrueHash; }

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.hash == y.hash && x.kind == y.kind && x.a == y.a && x.b == y.b && x.act == y.act && x.l == y.l &&
           x.r == y.r;
}

bool is_bound_modality(FormulaKind k) {
    switch (k) {
    case FormulaKind::OutDia:
    case FormulaKind::OutBox:
    case FormulaKind::InDia:
    case FormulaKind::InBox:
    case FormulaKind::InDiaL:
    case FormulaKind::InBoxL:
    case FormulaKind::InDiaE:
    case FormulaKind::InBoxE:
        return true;
    default:
        return false;
    }
}

// -- traversal ------------------------------------------------------------------

namespace {

template <class F>
Formula rewrite(const Formula& f, std::uint32_t depth, const F& fn) {
    switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
        return f;
    case FormulaKind::And:
        return Formula::conj(rewrite(f.lhs(), depth, fn), rewrite(f.rhs(), depth, fn));
    case FormulaKind::Or:
        return Formula::disj(rewrite(f.lhs(), depth, fn), rewrite(f.rhs(), depth, fn));
    case FormulaKind::MatchDia:
        return Formula::match_dia(fn(f.lhs_name(), depth), fn(f.rhs_name(), depth), rewrite(f.body(), depth, fn));
    case FormulaKind::MatchBox:
        return Formula::match_box(fn(f.lhs_name(), depth), fn(f.rhs_name(), depth), rewrite(f.body(), depth, fn));
    case FormulaKind::ActDia:
    case FormulaKind::ActBox: {
        Action a = f.action();
        if (a.kind != ActionKind::Tau) a.channel = fn(a.channel, depth);
        if (a.has_object()) a.object = fn(a.object, depth);
        return Formula::act(f.kind() == FormulaKind::ActDia, a, rewrite(f.body(), depth, fn));
    }
    default:
        return Formula::bound(f.kind(), fn(f.lhs_name(), depth), rewrite(f.body(), depth + 1, fn), f.hint());
    }
}

template <class Visit>
void visit_names(const Formula& f, const Visit& v) {
    switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
        return;
    case FormulaKind::And:
    case FormulaKind::Or:
        visit_names(f.lhs(), v);
        visit_names(f.rhs(), v);
        return;
    case FormulaKind::MatchDia:
    case FormulaKind::MatchBox:
        v(f.lhs_name());
        v(f.rhs_name());
        visit_names(f.body(), v);
        return;
    case FormulaKind::ActDia:
    case FormulaKind::ActBox:
        if (f.action().kind != ActionKind::Tau) v(f.action().channel);
        if (f.action().has_object()) v(f.action().object);
        visit_names(f.body(), v);
        return;
    default:
        v(f.lhs_name());
        visit_names(f.body(), v);
    }
}

}  // namespace

Formula map_names(const Formula& f, const std::function<Name(const Name&)>& fn) {
    return rewrite(f, 0, [&](const Name& n, std::uint32_t) { return n.is_bound() ? n : fn(n); });
}

Formula instantiate(const Formula& body, const Name& n) {
    return rewrite(body, 0, [&](const Name& x, std::uint32_t depth) {
        if (!x.is_bound()) return x;
        if (x.index == depth) return n;
        if (x.index > depth) return Name::bound(x.index - 1);
        return x;
    });
}

Formula abstract(const Formula& f, const Name& n) {
    return rewrite(f, 0, [&](const Name& x, std::uint32_t depth) {
        if (x.is_bound()) return x.index >= depth ? Name::bound(x.index + 1) : x;
        return x == n ? Name::bound(depth) : x;
    });
}

Formula apply(const Substitution& theta, const Formula& f) {
    if (theta.is_identity()) return f;
    return map_names(f, [&](const Name& n) { return theta(n); });
}

std::vector<Name> free_names(const Formula& f) {
    std::set<Name> s;
    visit_names(f, [&](const Name& n) {
        if (!n.is_bound()) s.insert(n);
    });
    return {s.begin(), s.end()};
}

std::uint32_t max_level(const Formula& f) {
    std::uint32_t m = 0;
    for (const Name& n : free_names(f)) {
        if (n.is_nabla()) m = std::max(m, n.index);
        if (n.is_eigen()) m = std::max(m, n.ceiling);
    }
    return m;
}

Formula dual(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::True:
        return Formula::falsity();
    case FormulaKind::False:
        return Formula::truth();
    case FormulaKind::And:
        return Formula::disj(dual(f.lhs()), dual(f.rhs()));
    case FormulaKind::Or:
        return Formula::conj(dual(f.lhs()), dual(f.rhs()));
    case FormulaKind::MatchDia:
        return Formula::match_box(f.lhs_name(), f.rhs_name(), dual(f.body()));
    case FormulaKind::MatchBox:
        return Formula::match_dia(f.lhs_name(), f.rhs_name(), dual(f.body()));
    case FormulaKind::ActDia:
        return Formula::act(false, f.action(), dual(f.body()));
    case FormulaKind::ActBox:
        return Formula::act(true, f.action(), dual(f.body()));
    default: {
        static const std::pair<FormulaKind, FormulaKind> swaps[] = {
            {FormulaKind::OutDia, FormulaKind::OutBox}, {FormulaKind::InDia, FormulaKind::InBox},
            {FormulaKind::InDiaL, FormulaKind::InBoxL}, {FormulaKind::InDiaE, FormulaKind::InBoxE}};
        FormulaKind k = f.kind();
        for (const auto& [a, b] : swaps) {
            if (k == a) {
                k = b;
                break;
            }
            if (k == b) {
                k = a;
                break;
            }
        }
        return Formula::bound(k, f.lhs_name(), dual(f.body()), f.hint());
    }
    }
}

std::size_t fresh_budget(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
        return 0;
    case FormulaKind::And:
    case FormulaKind::Or:
        return fresh_budget(f.lhs()) + fresh_budget(f.rhs());
    case FormulaKind::InDia:
    case FormulaKind::InBox:
    case FormulaKind::InDiaL:
    case FormulaKind::InBoxL:
    case FormulaKind::InDiaE:
    case FormulaKind::InBoxE:
        return 1 + fresh_budget(f.body());
    default:
        return fresh_budget(f.body());
    }
}

std::size_t modal_depth(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
        return 0;
    case FormulaKind::And:
    case FormulaKind::Or:
        return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
    case FormulaKind::MatchDia:
    case FormulaKind::MatchBox:
        return modal_depth(f.body());
    default:
        return 1 + modal_depth(f.body());
    }
}

bool has_free_input(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
        return false;
    case FormulaKind::And:
    case FormulaKind::Or:
        return has_free_input(f.lhs()) || has_free_input(f.rhs());
    case FormulaKind::ActDia:
    case FormulaKind::ActBox:
        return f.action().kind == ActionKind::FreeIn || has_free_input(f.body());
    default:
        return has_free_input(f.body());
    }
}

bool is_lm(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
        return true;
    case FormulaKind::And:
    case FormulaKind::Or:
        return is_lm(f.lhs()) && is_lm(f.rhs());
    case FormulaKind::MatchDia:
    case FormulaKind::MatchBox:
    case FormulaKind::OutDia:
    case FormulaKind::OutBox:
    case FormulaKind::InDiaL:
    case FormulaKind::InBoxL:
        return is_lm(f.body());
    case FormulaKind::ActDia:
    case FormulaKind::ActBox:
        return f.action().kind != ActionKind::FreeIn && is_lm(f.body());
    default:
        return false;
    }
}

// -- parsing --------------------------------------------------------------------

namespace {

class FormulaParser {
public:
    explicit FormulaParser(Lexer& lx) : lx_(lx) {}

    std::vector<std::string> symbols;

    Formula formula() {
        Formula lhs = conjunction();
        if (lx_.at_ident("v")) {
            lx_.next();
            return Formula::disj(lhs, formula());
        }
        return lhs;
    }

private:
    Formula conjunction() {
        Formula lhs = unary();
        if (lx_.accept("&")) return Formula::conj(lhs, conjunction());
        return lhs;
    }

    std::string ident() {
        const auto& t = lx_.peek();
        if (t.kind != Tok::Ident || !detail::is_name(t.text) || t.text == "tau") lx_.fail({"name"});
        return lx_.next().text;
    }

    Name resolve(const std::string& s) {
        const auto n = static_cast<std::uint32_t>(binders_.size());
        for (std::uint32_t i = 0; i < n; ++i)
            if (binders_[n - 1 - i] == s) return Name::bound(i);
        auto it = std::find(symbols.begin(), symbols.end(), s);
        if (it != symbols.end()) return Name::free(static_cast<std::uint32_t>(it - symbols.begin()));
        symbols.push_back(s);
        return Name::free(static_cast<std::uint32_t>(symbols.size() - 1));
    }

    Formula unary() {
        const auto& t = lx_.peek();
        if (t.kind == Tok::Ident && t.text == "true") {
            lx_.next();
            return Formula::truth();
        }
        if (t.kind == Tok::Ident && t.text == "false") {
            lx_.next();
            return Formula::falsity();
        }
        if (lx_.accept("(")) {
            Formula f = formula();
            lx_.expect(")");
            return f;
        }
        bool diamond;
        if (lx_.accept("<"))
            diamond = true;
        else if (lx_.accept("["))
            diamond = false;
        else
            lx_.fail({"true", "false", "(", "<", "["});
        const std::string close = diamond ? ">" : "]";

        if (lx_.at_ident("tau")) {
            lx_.next();
            lx_.expect(close);
            return Formula::act(diamond, Action::tau(), unary());
        }
        std::string x = ident();
        if (lx_.accept("=")) {
            std::string y = ident();
            lx_.expect(close);
            Name a = resolve(x), b = resolve(y);
            return diamond ? Formula::match_dia(a, b, unary()) : Formula::match_box(a, b, unary());
        }
        const bool output = lx_.accept("!");
        if (!output && !lx_.accept("?")) lx_.fail({"=", "!", "?"});
        if (lx_.accept("(")) {
            std::string y = ident();
            lx_.expect(")");
            lx_.expect(close);
            FormulaKind k;
            if (output) {
                k = diamond ? FormulaKind::OutDia : FormulaKind::OutBox;
            } else if (lx_.at_ident("L")) {
                lx_.next();
                k = diamond ? FormulaKind::InDiaL : FormulaKind::InBoxL;
            } else if (lx_.at_ident("E")) {
                lx_.next();
                k = diamond ? FormulaKind::InDiaE : FormulaKind::InBoxE;
            } else {
                k = diamond ? FormulaKind::InDia : FormulaKind::InBox;
            }
            Name ch = resolve(x);
            binders_.push_back(y);
            Formula body = unary();
            binders_.pop_back();
            return Formula::bound(k, ch, body, y);
        }
        std::string y = ident();
        lx_.expect(close);
        Name a = resolve(x), b = resolve(y);
        Action act = output ? Action::free_out(a, b) : Action::free_in(a, b);
        return Formula::act(diamond, act, unary());
    }

    Lexer& lx_;
    std::vector<std::string> binders_;
};

}  // namespace

ParsedFormula parse_formula(std::string_view text) {
    Lexer lx(text);
    FormulaParser fp(lx);
    ParsedFormula out;
    out.formula = fp.formula();
    if (lx.peek().kind != Tok::End) lx.fail({"&", "v", "end of input"});
    out.symbols = std::move(fp.symbols);
    return out;
}

Formula encode(const ParsedFormula& f, const Prefix& prefix) {
    NameEnv env(prefix);
    std::vector<Name> table;
    for (const auto& s : f.symbols) table.push_back(env.lookup(s));
    return map_names(f.formula, [&](const Name& n) { return n.is_free() ? table.at(n.index) : n; });
}

// -- printing -------------------------------------------------------------------

namespace {

class FormulaPrinter {
public:
    explicit FormulaPrinter(const NameEnv& env) : env_(env) {}

    std::string disj(const Formula& f) {
        if (f.kind() == FormulaKind::Or) return conj(f.lhs()) + " v " + disj(f.rhs());
        return conj(f);
    }

private:
    std::string conj(const Formula& f) {
        if (f.kind() == FormulaKind::And) return unary(f.lhs()) + " & " + conj(f.rhs());
        if (f.kind() == FormulaKind::Or) return "(" + disj(f) + ")";
        return unary(f);
    }

    std::string unary(const Formula& f) {
        switch (f.kind()) {
        case FormulaKind::True:
            return "true";
        case FormulaKind::False:
            return "false";
        case FormulaKind::And:
        case FormulaKind::Or:
            return "(" + disj(f) + ")";
        case FormulaKind::MatchDia:
            return "<" + name(f.lhs_name()) + "=" + name(f.rhs_name()) + ">" + unary(f.body());
        case FormulaKind::MatchBox:
            return "[" + name(f.lhs_name()) + "=" + name(f.rhs_name()) + "]" + unary(f.body());
        case FormulaKind::ActDia:
        case FormulaKind::ActBox: {
            const bool dia = f.kind() == FormulaKind::ActDia;
            const Action& a = f.action();
            std::string inner = a.kind == ActionKind::Tau ? "tau"
                                : name(a.channel) + (a.kind == ActionKind::FreeOut ? "!" : "?") + name(a.object);
            return (dia ? "<" : "[") + inner + (dia ? ">" : "]") + unary(f.body());
        }
        default: {
            const FormulaKind k = f.kind();
            const bool dia = k == FormulaKind::OutDia || k == FormulaKind::InDia || k == FormulaKind::InDiaL ||
                             k == FormulaKind::InDiaE;
            const bool out = k == FormulaKind::OutDia || k == FormulaKind::OutBox;
            std::string suffix;
            if (k == FormulaKind::InDiaL || k == FormulaKind::InBoxL) suffix = "L ";
            if (k == FormulaKind::InDiaE || k == FormulaKind::InBoxE) suffix = "E ";
            std::string ch = name(f.lhs_name());
            stack_.push_back(fresh_ident(f.hint(), env_, stack_));
            std::string y = stack_.back();
            std::string body = unary(f.body());
            stack_.pop_back();
            return std::string(dia ? "<" : "[") + ch + (out ? "!(" : "?(") + y + ")" + (dia ? ">" : "]") + suffix +
                   body;
        }
        }
    }

    std::string name(const Name& n) {
        if (n.is_bound()) {
            if (n.index >= stack_.size()) throw InternalError("dangling bound name in formula");
            return stack_[stack_.size() - 1 - n.index];
        }
        return env_.name_of(n);
    }

    const NameEnv& env_;
    std::vector<std::string> stack_;
};

}  // namespace

std::string pretty(const Formula& f, const NameEnv& env) {
    for (const Name& n : free_names(f)) env.name_of(n);
    return FormulaPrinter(env).disj(f);
}

std::string pretty(const Formula& f, const Prefix& prefix) { return pretty(f, NameEnv(prefix)); }

// -- ground satisfaction ----------------------------------------------------------

namespace {

std::set<Name> names_of(const Process& p, const Formula& a) {
    std::set<Name> s;
    for (const Name& n : free_names(p)) s.insert(n);
    for (const Name& n : free_names(a)) s.insert(n);
    return s;
}

class GroundSat {
public:
    bool sat(const Process& p, const Formula& a, std::uint32_t scope) {
        switch (a.kind()) {
        case FormulaKind::True:
            return true;
        case FormulaKind::False:
            return false;
        case FormulaKind::And:
            return sat(p, a.lhs(), scope) && sat(p, a.rhs(), scope);
        case FormulaKind::Or:
            return sat(p, a.lhs(), scope) || sat(p, a.rhs(), scope);
        case FormulaKind::MatchDia:
            return a.lhs_name() == a.rhs_name() && sat(p, a.body(), scope);
        case FormulaKind::MatchBox:
            return a.lhs_name() != a.rhs_name() || sat(p, a.body(), scope);
        case FormulaKind::ActDia:
        case FormulaKind::ActBox: {
            const bool dia = a.kind() == FormulaKind::ActDia;
            for (const auto& t : successors(p, scope)) {
                if (t.action != a.action()) continue;
                if (sat(t.cont, a.body(), scope) == dia) return dia;
            }
            return !dia;
        }
        case FormulaKind::OutDia:
        case FormulaKind::OutBox: {
            const bool dia = a.kind() == FormulaKind::OutDia;
            const Name w = Name::nabla(scope + 1);
            const Formula body = instantiate(a.body(), w);
            for (const auto& t : successors(p, scope)) {
                if (t.action != Action::bound_out(a.lhs_name())) continue;
                if (sat(instantiate(t.cont, w), body, scope + 1) == dia) return dia;
            }
            return !dia;
        }
        default:
            return input(p, a, scope);
        }
    }

private:
    // y ranges over the names of the judgment plus one name it does not
    // mention; every unmentioned constant behaves the same.
    static std::vector<Name> domain(const Process& p, const Formula& a, std::uint32_t scope) {
        std::set<Name> used = names_of(p, a);
        std::vector<Name> dom(used.begin(), used.end());
        for (std::uint32_t l = 1; l <= scope; ++l)
            if (!used.count(Name::nabla(l))) {
                dom.push_back(Name::nabla(l));
                break;
            }
        return dom;
    }

    bool input(const Process& p, const Formula& a, std::uint32_t scope) {
        std::vector<Process> conts;
        for (const auto& t : successors(p, scope))
            if (t.action == Action::bound_in(a.lhs_name())) conts.push_back(t.cont);
        const auto dom = domain(p, a, scope);
        auto holds = [&](const Process& m, const Name& y) {
            return sat(instantiate(m, y), instantiate(a.body(), y), scope);
        };
        auto some_y = [&](const Process& m) {
            return std::any_of(dom.begin(), dom.end(), [&](const Name& y) { return holds(m, y); });
        };
        auto every_y = [&](const Process& m) {
            return std::all_of(dom.begin(), dom.end(), [&](const Name& y) { return holds(m, y); });
        };
        auto some_p = [&](const Name& y) {
            return std::any_of(conts.begin(), conts.end(), [&](const Process& m) { return holds(m, y); });
        };
        auto every_p = [&](const Name& y) {
            return std::all_of(conts.begin(), conts.end(), [&](const Process& m) { return holds(m, y); });
        };
        switch (a.kind()) {
        case FormulaKind::InDia:
            return std::any_of(conts.begin(), conts.end(), some_y);
        case FormulaKind::InBox:
            return std::all_of(conts.begin(), conts.end(), every_y);
        case FormulaKind::InDiaL:
            return std::any_of(conts.begin(), conts.end(), every_y);
        case FormulaKind::InBoxL:
            return std::all_of(conts.begin(), conts.end(), some_y);
        case FormulaKind::InDiaE:
            return std::all_of(dom.begin(), dom.end(), some_p);
        case FormulaKind::InBoxE:
            return std::any_of(dom.begin(), dom.end(), every_p);
        default:
            throw InternalError("unexpected formula in input clause");
        }
    }
};

}  // namespace

bool sat_ground(const Process& p, const Formula& a, std::optional<std::uint32_t> extra_names, std::uint32_t depth) {
    if (has_free_input(a)) throw FreeInputModality();
    for (const auto& n : names_of(p, a))
        if (!n.is_nabla()) throw UsageError("ground satisfaction needs every free name to be a nabla constant");
    const std::uint32_t extras = extra_names ? *extra_names : static_cast<std::uint32_t>(fresh_budget(a));
    const std::uint32_t base = std::max({depth, max_level(p), max_level(a)});
    return GroundSat().sat(p, a, base + extras);
}

// -- open satisfaction ---------------------------------------------------------------

namespace {

struct OpenCtx {
    std::uint32_t scope = 0;  // nabla levels 1..scope
    std::uint32_t next_eigen = 1;
    Distinction distinction;
    std::set<Name> eigens;  // eigenvariables of the signature

    OpenCtx after(const Substitution& theta) const {
        OpenCtx c = *this;
        c.distinction = apply(theta, distinction);
        c.eigens.clear();
        for (const Name& e : eigens) {
            Name v = theta(e);
            if (v.is_eigen()) c.eigens.insert(v);
        }
        return c;
    }
};

class OpenSat {
public:
    bool sat(const Process& p, const Formula& a, const OpenCtx& ctx) {
        switch (a.kind()) {
        case FormulaKind::True:
            return true;
        case FormulaKind::False:
            return false;
        case FormulaKind::And:
            return sat(p, a.lhs(), ctx) && sat(p, a.rhs(), ctx);
        case FormulaKind::Or:
            return sat(p, a.lhs(), ctx) || sat(p, a.rhs(), ctx);
        case FormulaKind::MatchDia:
            return a.lhs_name() == a.rhs_name() && sat(p, a.body(), ctx);
        case FormulaKind::MatchBox: {
            auto th = unify_names(a.lhs_name(), a.rhs_name());
            if (!th || !respects(*th, ctx.distinction)) return true;
            return sat(apply(*th, p), apply(*th, a.body()), ctx.after(*th));
        }
        case FormulaKind::ActDia:
            for (const auto& t : successors(p, ctx.scope))
                if (t.theta.is_identity() && t.action == a.action() && sat(t.cont, a.body(), ctx)) return true;
            return false;
        case FormulaKind::ActBox:
            return box(p, a, ctx, a.action(), [&](const Process& cont, const Formula& body, const OpenCtx& c) {
                return sat(cont, body, c);
            });
        case FormulaKind::OutDia: {
            const Name w = Name::nabla(ctx.scope + 1);
            OpenCtx inner = ctx;
            inner.scope += 1;
            for (const auto& t : successors(p, ctx.scope))
                if (t.theta.is_identity() && t.action == Action::bound_out(a.lhs_name()) &&
                    sat(instantiate(t.cont, w), instantiate(a.body(), w), inner))
                    return true;
            return false;
        }
        case FormulaKind::OutBox:
            return box(p, a, ctx, Action::bound_out(a.lhs_name()),
                       [&](const Process& cont, const Formula& body, const OpenCtx& c) {
                           const Name w = Name::nabla(c.scope + 1);
                           OpenCtx inner = c;
                           inner.scope += 1;
                           return sat(instantiate(cont, w), instantiate(body, w), inner);
                       });
        case FormulaKind::InDiaL: {
            const Name w = Name::eigen(ctx.next_eigen, ctx.scope);
            OpenCtx inner = ctx;
            inner.next_eigen += 1;
            inner.eigens.insert(w);
            for (const auto& t : successors(p, ctx.scope))
                if (t.theta.is_identity() && t.action == Action::bound_in(a.lhs_name()) &&
                    sat(instantiate(t.cont, w), instantiate(a.body(), w), inner))
                    return true;
            return false;
        }
        case FormulaKind::InBoxL:
            return box(p, a, ctx, Action::bound_in(a.lhs_name()),
                       [&](const Process& cont, const Formula& body, const OpenCtx& c) {
                           for (const Name& y : witnesses(cont, body, c))
                               if (sat(instantiate(cont, y), instantiate(body, y), c)) return true;
                           return false;
                       });
        default:
            throw FormulaOutsideLM("modality not in the sublogic");
        }
    }

private:
    // Every transition whose action can be made equal to `want`; each
    // such branch must succeed after the substitution, unless it clashes
    // with the distinction.
    template <class K>
    bool box(const Process& p, const Formula& a, const OpenCtx& ctx, const Action& want, const K& k) {
        for (const auto& t : successors(p, ctx.scope)) {
            auto u = unify_actions(t.action, apply(t.theta, want));
            if (!u) continue;
            const Substitution total = compose(*u, t.theta);
            if (!respects(total, ctx.distinction)) continue;
            if (!k(apply(*u, t.cont), apply(total, a.body()), ctx.after(total))) return false;
        }
        return true;
    }

    // Candidate terms for an existential name: the names of the judgment,
    // one unmentioned nabla level and one unmentioned eigenvariable.
    static std::vector<Name> witnesses(const Process& body_p, const Formula& body_a, const OpenCtx& ctx) {
        std::set<Name> used = names_of(body_p, body_a);
        std::vector<Name> dom(used.begin(), used.end());
        for (std::uint32_t l = 1; l <= ctx.scope; ++l)
            if (!used.count(Name::nabla(l))) {
                dom.push_back(Name::nabla(l));
                break;
            }
        for (const Name& e : ctx.eigens)
            if (!used.count(e)) {
                dom.push_back(e);
                break;
            }
        return dom;
    }
};

}  // namespace

namespace {

bool sat_open_impl(const Process& p, const Formula& a, std::uint32_t depth, const Distinction& distinction,
                   const std::vector<Name>& declared) {
    if (!is_lm(a)) throw FormulaOutsideLM(has_free_input(a) ? "free input modality" : "non-late input modality");
    OpenCtx ctx;
    ctx.scope = std::max({depth, max_level(p), max_level(a)});
    ctx.distinction = distinction;
    std::vector<Name> all = declared;
    for (const auto& n : names_of(p, a)) all.push_back(n);
    for (const auto& [x, y] : distinction.pairs()) {
        all.push_back(x);
        all.push_back(y);
    }
    for (const Name& n : all)
        if (n.is_eigen()) {
            ctx.eigens.insert(n);
            ctx.next_eigen = std::max(ctx.next_eigen, n.index + 1);
        }
    return OpenSat().sat(p, a, ctx);
}

}  // namespace

bool sat_open(const Process& p, const Formula& a, std::uint32_t depth, const Distinction& distinction) {
    return sat_open_impl(p, a, depth, distinction, {});
}

bool sat_open(const Process& p, const Formula& a, const Prefix& prefix, const Distinction& distinction) {
    return sat_open_impl(p, a, prefix.nabla_count(), distinction, prefix.names());
}

}  // namespace pisym
