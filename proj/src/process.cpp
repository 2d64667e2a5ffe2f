#include "pisym/process.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace pisym {

struct Process::Node {
    ProcKind kind = ProcKind::Nil;
    Name a{};
    Name b{};
    Process l;  // cont / body / lhs
    Process r;  // rhs
    std::string hint;
    std::size_t hash = 0;

    Node() = default;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
}

constexpr std::size_t kNilHash = 0x51ed27;

}  // namespace

// A null node is 0; this keeps the leaf allocation-free.
Process::Process() = default;

#define PISYM_FINISH(node)                                                        \
    do {                                                                          \
        std::size_t h = static_cast<std::size_t>((node)->kind) * 0x100000001b3ULL; \
        h = mix(h, (node)->a.hash());                                             \
        h = mix(h, (node)->b.hash());                                             \
        h = mix(h, (node)->l.hash());                                             \
        h = mix(h, (node)->r.hash());                                             \
        (node)->hash = h;                                                         \
    } while (0)

Process Process::nil() { return Process(); }

Process Process::tau(Process cont) {
    auto n = std::make_shared<Node>();
    n->kind = ProcKind::Tau;
    n->l = std::move(cont);
    PISYM_FINISH(n);
    return Process(std::move(n));
}

Process Process::out(Name channel, Name object, Process cont) {
    auto n = std::make_shared<Node>();
    n->kind = ProcKind::Out;
    n->a = channel;
    n->b = object;
    n->l = std::move(cont);
    PISYM_FINISH(n);
    return Process(std::move(n));
}

Process Process::in(Name channel, Process body, std::string hint) {
    auto n = std::make_shared<Node>();
    n->kind = ProcKind::In;
    n->a = channel;
    n->l = std::move(body);
    n->hint = std::move(hint);
    PISYM_FINISH(n);
    return Process(std::move(n));
}

Process Process::match(Name lhs, Name rhs, Process cont) {
    auto n = std::make_shared<Node>();
    n->kind = ProcKind::Match;
    n->a = lhs;
    n->b = rhs;
    n->l = std::move(cont);
    PISYM_FINISH(n);
    return Process(std::move(n));
}

Process Process::sum(Process lhs, Process rhs) {
    auto n = std::make_shared<Node>();
    n->kind = ProcKind::Sum;
    n->l = std::move(lhs);
    n->r = std::move(rhs);
    PISYM_FINISH(n);
    return Process(std::move(n));
}

Process Process::par(Process lhs, Process rhs) {
    auto n = std::make_shared<Node>();
    n->kind = ProcKind::Par;
    n->l = std::move(lhs);
    n->r = std::move(rhs);
    PISYM_FINISH(n);
    return Process(std::move(n));
}

Process Process::nu(Process body, std::string hint) {
    auto n = std::make_shared<Node>();
    n->kind = ProcKind::Nu;
    n->l = std::move(body);
    n->hint = std::move(hint);
    PISYM_FINISH(n);
    return Process(std::move(n));
}

Process Process::bang(Process cont) {
    auto n = std::make_shared<Node>();
    n->kind = ProcKind::Bang;
    n->l = std::move(cont);
    PISYM_FINISH(n);
    return Process(std::move(n));
}

#undef PISYM_FINISH

namespace {
const Process::Node& empty_node() {
    static const Process::Node n;
    return n;
}
}  // namespace

ProcKind Process::kind() const { return node_ ? node_->kind : ProcKind::Nil; }
const Name& Process::channel() const { return (node_ ? *node_ : empty_node()).a; }
const Name& Process::object() const { return (node_ ? *node_ : empty_node()).b; }
const Process& Process::cont() const { return (node_ ? *node_ : empty_node()).l; }
const Process& Process::lhs() const { return (node_ ? *node_ : empty_node()).l; }
const Process& Process::rhs() const { return (node_ ? *node_ : empty_node()).r; }
const std::string& Process::hint() const { return (node_ ? *node_ : empty_node()).hint; }
std::size_t Process::hash() const { return node_ ? node_->hash : kNilHash; }

bool operator==(const Process& a, const Process& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.hash != y.hash || x.kind != y.kind) return false;
    switch (x.kind) {
    case ProcKind::Nil:
        return true;
    case ProcKind::Tau:
    case ProcKind::Nu:
    case ProcKind::Bang:
        return x.l == y.l;
    case ProcKind::In:
        return x.a == y.a && x.l == y.l;
    case ProcKind::Out:
    case ProcKind::Match:
        return x.a == y.a && x.b == y.b && x.l == y.l;
    case ProcKind::Sum:
    case ProcKind::Par:
        return x.l == y.l && x.r == y.r;
    }
    return false;
}

bool operator<(const Process& a, const Process& b) {
    if (a.node_ == b.node_) return false;
    if (!a.node_ || !b.node_) return !a.node_;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.kind != y.kind) return x.kind < y.kind;
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    if (x.l != y.l) return x.l < y.l;
    return x.r < y.r;
}

bool alpha_eq(const Process& p, const Process& q) { return p == q; }

namespace {

void collect(const Process& p, std::set<Name>& out) {
    auto add = [&](const Name& n) {
        if (!n.is_bound()) out.insert(n);
    };
    switch (p.kind()) {
    case ProcKind::Nil:
        return;
    case ProcKind::Out:
    case ProcKind::Match:
        add(p.channel());
        add(p.object());
        collect(p.cont(), out);
        return;
    case ProcKind::In:
        add(p.channel());
        collect(p.cont(), out);
        return;
    case ProcKind::Tau:
    case ProcKind::Nu:
    case ProcKind::Bang:
        collect(p.cont(), out);
        return;
    case ProcKind::Sum:
    case ProcKind::Par:
        collect(p.lhs(), out);
        collect(p.rhs(), out);
        return;
    }
}

// Generic traversal: `f(name, depth)` rewrites a name seen under
// `depth` binders.
template <class F>
Process rewrite(const Process& p, std::uint32_t depth, const F& f) {
    switch (p.kind()) {
    case ProcKind::Nil:
        return p;
    case ProcKind::Tau: {
        Process c = rewrite(p.cont(), depth, f);
        return c == p.cont() ? p : Process::tau(std::move(c));
    }
    case ProcKind::Out: {
        Name a = f(p.channel(), depth), b = f(p.object(), depth);
        Process c = rewrite(p.cont(), depth, f);
        return Process::out(a, b, std::move(c));
    }
    case ProcKind::Match: {
        Name a = f(p.channel(), depth), b = f(p.object(), depth);
        Process c = rewrite(p.cont(), depth, f);
        return Process::match(a, b, std::move(c));
    }
    case ProcKind::In: {
        Name a = f(p.channel(), depth);
        return Process::in(a, rewrite(p.cont(), depth + 1, f), p.hint());
    }
    case ProcKind::Nu:
        return Process::nu(rewrite(p.cont(), depth + 1, f), p.hint());
    case ProcKind::Bang:
        return Process::bang(rewrite(p.cont(), depth, f));
    case ProcKind::Sum:
        return Process::sum(rewrite(p.lhs(), depth, f), rewrite(p.rhs(), depth, f));
    case ProcKind::Par:
        return Process::par(rewrite(p.lhs(), depth, f), rewrite(p.rhs(), depth, f));
    }
    return p;
}

}  // namespace

std::vector<Name> free_names(const Process& p) {
    std::set<Name> s;
    collect(p, s);
    return {s.begin(), s.end()};
}

Process map_names(const Process& p, const std::function<Name(const Name&)>& f) {
    return rewrite(p, 0, [&](const Name& n, std::uint32_t) { return n.is_bound() ? n : f(n); });
}

Process instantiate(const Process& body, const Name& n) {
    return rewrite(body, 0, [&](const Name& x, std::uint32_t depth) {
        if (!x.is_bound()) return x;
        if (x.index == depth) return n;
        if (x.index > depth) return Name::bound(x.index - 1);
        return x;
    });
}

Process abstract(const Process& p, const Name& n) {
    return rewrite(p, 0, [&](const Name& x, std::uint32_t depth) {
        if (x.is_bound()) return x.index >= depth ? Name::bound(x.index + 1) : x;
        return x == n ? Name::bound(depth) : x;
    });
}

Process shift(const Process& p, std::uint32_t amount, std::uint32_t cutoff) {
    return rewrite(p, 0, [&](const Name& x, std::uint32_t depth) {
        if (x.is_bound() && x.index >= depth + cutoff) return Name::bound(x.index + amount);
        return x;
    });
}

std::size_t prefix_count(const Process& p) {
    switch (p.kind()) {
    case ProcKind::Nil:
        return 0;
    case ProcKind::Tau:
    case ProcKind::Out:
    case ProcKind::In:
        return 1 + prefix_count(p.cont());
    case ProcKind::Match:
    case ProcKind::Nu:
    case ProcKind::Bang:
        return prefix_count(p.cont());
    case ProcKind::Sum:
    case ProcKind::Par:
        return prefix_count(p.lhs()) + prefix_count(p.rhs());
    }
    return 0;
}

std::size_t size(const Process& p) {
    switch (p.kind()) {
    case ProcKind::Nil:
        return 1;
    case ProcKind::Sum:
    case ProcKind::Par:
        return 1 + size(p.lhs()) + size(p.rhs());
    default:
        return 1 + size(p.cont());
    }
}

bool contains_bang(const Process& p) {
    switch (p.kind()) {
    case ProcKind::Nil:
        return false;
    case ProcKind::Bang:
        return true;
    case ProcKind::Sum:
    case ProcKind::Par:
        return contains_bang(p.lhs()) || contains_bang(p.rhs());
    default:
        return contains_bang(p.cont());
    }
}

std::uint32_t max_level(const Process& p) {
    std::uint32_t m = 0;
    for (const Name& n : free_names(p)) {
        if (n.is_nabla()) m = std::max(m, n.index);
        if (n.is_eigen()) m = std::max(m, n.ceiling);
    }
    return m;
}

std::uint32_t max_eigen_id(const Process& p) {
    std::uint32_t m = 0;
    for (const Name& n : free_names(p))
        if (n.is_eigen()) m = std::max(m, n.index);
    return m;
}

std::string debug_string(const Name& n) {
    switch (n.kind) {
    case NameKind::Bound:
        return "#" + std::to_string(n.index);
    case NameKind::Nabla:
        return "n" + std::to_string(n.index);
    case NameKind::Eigen:
        return "E" + std::to_string(n.index) + "^" + std::to_string(n.ceiling);
    case NameKind::Free:
        return "?" + std::to_string(n.index);
    }
    return "?";
}

std::string debug_string(const Process& p) {
    switch (p.kind()) {
    case ProcKind::Nil:
        return "0";
    case ProcKind::Tau:
        return "tau." + debug_string(p.cont());
    case ProcKind::Out:
        return "out(" + debug_string(p.channel()) + "," + debug_string(p.object()) + "," + debug_string(p.cont()) + ")";
    case ProcKind::In:
        return "in(" + debug_string(p.channel()) + ",\\." + debug_string(p.cont()) + ")";
    case ProcKind::Match:
        return "[" + debug_string(p.channel()) + "=" + debug_string(p.object()) + "]" + debug_string(p.cont());
    case ProcKind::Sum:
        return "(" + debug_string(p.lhs()) + " + " + debug_string(p.rhs()) + ")";
    case ProcKind::Par:
        return "(" + debug_string(p.lhs()) + " | " + debug_string(p.rhs()) + ")";
    case ProcKind::Nu:
        return "nu\\." + debug_string(p.cont());
    case ProcKind::Bang:
        return "!" + debug_string(p.cont());
    }
    return "?";
}

std::string debug_string(const Action& a) {
    switch (a.kind) {
    case ActionKind::Tau:
        return "tau";
    case ActionKind::FreeOut:
        return debug_string(a.channel) + "!" + debug_string(a.object);
    case ActionKind::FreeIn:
        return debug_string(a.channel) + "?" + debug_string(a.object);
    case ActionKind::BoundOut:
        return debug_string(a.channel) + "!()";
    case ActionKind::BoundIn:
        return debug_string(a.channel) + "?()";
    }
    return "?";
}

}  // namespace pisym
