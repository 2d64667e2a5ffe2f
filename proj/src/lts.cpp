#include "pisym/lts.hpp"

#include <deque>
#include <unordered_map>

#include "pisym/errors.hpp"

namespace pisym {

namespace {

Name nabla_above(std::uint32_t depth) { return Name::nabla(depth + 1); }

void push_unique(SuccessorSet& out, Transition t) {
    for (const auto& u : out)
        if (u == t) return;
    out.push_back(std::move(t));
}

bool mentions(const Action& a, const Name& n) {
    if (a.kind == ActionKind::Tau) return false;
    if (a.channel == n) return true;
    return a.has_object() && a.object == n;
}

class Stepper {
public:
    SuccessorSet gen(const Process& p, std::uint32_t d) {
        SuccessorSet out;
        switch (p.kind()) {
        case ProcKind::Nil:
            break;
        case ProcKind::Tau:
            out.push_back({{}, Action::tau(), p.cont()});
            break;
        case ProcKind::In:
            out.push_back({{}, Action::bound_in(p.channel()), p.cont()});
            break;
        case ProcKind::Out:
            out.push_back({{}, Action::free_out(p.channel(), p.object()), p.cont()});
            break;
        case ProcKind::Match: {
            auto mgu = unify_names(p.channel(), p.object());
            if (!mgu) break;
            for (auto& t : gen(apply(*mgu, p.cont()), d))
                push_unique(out, {compose(t.theta, *mgu), t.action, t.cont});
            break;
        }
        case ProcKind::Sum:
            for (auto& t : gen(p.lhs(), d)) push_unique(out, t);
            for (auto& t : gen(p.rhs(), d)) push_unique(out, t);
            break;
        case ProcKind::Par:
            par(p.lhs(), p.rhs(), d, out);
            break;
        case ProcKind::Nu:
            nu(p.cont(), d, out);
            break;
        case ProcKind::Bang:
            bang(p, d, out);
            break;
        }
        return out;
    }

private:
    void par(const Process& l, const Process& r, std::uint32_t d, SuccessorSet& out) {
        const auto left = gen(l, d);
        for (const auto& t : left) push_unique(out, {t.theta, t.action, Process::par(t.cont, apply(t.theta, r))});
        for (const auto& t : gen(r, d)) push_unique(out, {t.theta, t.action, Process::par(apply(t.theta, l), t.cont)});

        // close-left, close-right, com-left, com-right
        communicate(left, r, d, ActionKind::BoundIn, ActionKind::BoundOut, out, [](const Process& m, const Process& n, const Action&) {
            return Process::nu(Process::par(m, n));
        });
        communicate(left, r, d, ActionKind::BoundOut, ActionKind::BoundIn, out, [](const Process& m, const Process& n, const Action&) {
            return Process::nu(Process::par(m, n));
        });
        communicate(left, r, d, ActionKind::BoundIn, ActionKind::FreeOut, out, [](const Process& m, const Process& n, const Action& a2) {
            return Process::par(instantiate(m, a2.object), n);
        });
        communicate(left, r, d, ActionKind::FreeOut, ActionKind::BoundIn, out, [](const Process& m, const Process& n, const Action& a1) {
            return Process::par(m, instantiate(n, a1.object));
        });
    }

    // First a transition of the left component, then one of the right
    // component under the left's substitution, then the channel unifier.
    // `build(c1, c2, a)` gets both continuations with everything applied,
    // and the free-output action when there is one.
    template <class Build>
    void communicate(const SuccessorSet& left, const Process& r, std::uint32_t d, ActionKind k1, ActionKind k2,
                     SuccessorSet& out, Build build) {
        for (const auto& t1 : left) {
            if (t1.action.kind != k1) continue;
            for (const auto& t2 : gen(apply(t1.theta, r), d)) {
                if (t2.action.kind != k2) continue;
                auto mgu = unify_names(apply(t2.theta, t1.action.channel), t2.action.channel);
                if (!mgu) continue;
                const Substitution inner = compose(*mgu, t2.theta);
                const Substitution total = compose(inner, t1.theta);
                const Process c1 = apply(inner, t1.cont);
                const Process c2 = apply(*mgu, t2.cont);
                const Action& out_action = k1 == ActionKind::FreeOut ? apply(inner, t1.action) : apply(*mgu, t2.action);
                push_unique(out, {total, Action::tau(), build(c1, c2, out_action)});
            }
        }
    }

    void nu(const Process& body, std::uint32_t d, SuccessorSet& out) {
        const Name n = nabla_above(d);
        const auto inner = gen(instantiate(body, n), d + 1);
        // res
        for (const auto& t : inner) {
            if (mentions(t.action, n)) continue;
            push_unique(out, {t.theta, t.action, Process::nu(abstract(t.cont, n))});
        }
        // open
        for (const auto& t : inner) {
            if (t.action.kind != ActionKind::FreeOut || t.action.object != n || t.action.channel == n) continue;
            push_unique(out, {t.theta, Action::bound_out(t.action.channel), abstract(t.cont, n)});
        }
    }

    void bang(const Process& p, std::uint32_t d, SuccessorSet& out) {
        const Process& body = p.cont();
        const auto once = gen(body, d);
        for (const auto& t : once) {
            Process rest = apply(t.theta, p);
            push_unique(out, {t.theta, t.action, Process::par(t.cont, rest)});
        }
        // two copies talking: free output then input
        for (const auto& t1 : once) {
            if (t1.action.kind != ActionKind::FreeOut) continue;
            for (const auto& t2 : gen(apply(t1.theta, body), d)) {
                if (t2.action.kind != ActionKind::BoundIn) continue;
                auto mgu = unify_names(apply(t2.theta, t1.action.channel), t2.action.channel);
                if (!mgu) continue;
                const Substitution inner = compose(*mgu, t2.theta);
                const Substitution total = compose(inner, t1.theta);
                const Process c1 = apply(inner, t1.cont);
                const Process c2 = apply(*mgu, t2.cont);
                const Name y = apply(inner, t1.action.object);
                push_unique(out, {total, Action::tau(), Process::par(Process::par(c1, instantiate(c2, y)), apply(total, p))});
            }
        }
        // bound output then input
        for (const auto& t1 : once) {
            if (t1.action.kind != ActionKind::BoundOut) continue;
            for (const auto& t2 : gen(apply(t1.theta, body), d)) {
                if (t2.action.kind != ActionKind::BoundIn) continue;
                auto mgu = unify_names(apply(t2.theta, t1.action.channel), t2.action.channel);
                if (!mgu) continue;
                const Substitution inner = compose(*mgu, t2.theta);
                const Substitution total = compose(inner, t1.theta);
                const Process c1 = apply(inner, t1.cont);
                const Process c2 = apply(*mgu, t2.cont);
                push_unique(out, {total, Action::tau(), Process::par(Process::nu(Process::par(c1, c2)), apply(total, p))});
            }
        }
    }
};

}  // namespace

std::optional<Substitution> unify_actions(const Action& seen, const Action& want) {
    if (seen.kind != want.kind) return std::nullopt;
    if (seen.kind == ActionKind::Tau) return Substitution{};
    auto s = unify_names(seen.channel, want.channel);
    if (!s || !seen.has_object()) return s;
    auto o = unify_names(apply(*s, seen.object), apply(*s, want.object));
    if (!o) return std::nullopt;
    return compose(*o, *s);
}

SuccessorSet successors(const Process& p, std::uint32_t depth) { return Stepper().gen(p, depth); }

SuccessorSet successors(const Process& p) { return successors(p, depth_of(p)); }

SuccessorSet successors_free(const Process& p) {
    SuccessorSet out;
    for (auto& t : successors(p))
        if (!t.action.is_bound()) out.push_back(std::move(t));
    return out;
}

SuccessorSet successors_bound(const Process& p) {
    SuccessorSet out;
    for (auto& t : successors(p))
        if (t.action.is_bound()) out.push_back(std::move(t));
    return out;
}

bool has_no_transition(const Process& p) { return successors(p).empty(); }

LtsGraph lts_graph(const Process& p, std::size_t max_states) {
    LtsGraph g;
    std::unordered_map<Process, std::size_t, ProcessHash> index;
    std::deque<std::size_t> todo;
    auto intern = [&](const Process& q) {
        auto it = index.find(q);
        if (it != index.end()) return it->second;
        if (g.states.size() >= max_states) throw StateBudgetExceeded(max_states);
        g.states.push_back(q);
        index.emplace(q, g.states.size() - 1);
        todo.push_back(g.states.size() - 1);
        return g.states.size() - 1;
    };
    intern(p);
    while (!todo.empty()) {
        const std::size_t from = todo.front();
        todo.pop_front();
        const Process src = g.states[from];
        const std::uint32_t d = depth_of(src);
        for (const auto& t : successors(src, d)) {
            LtsGraph::Edge e{from, 0, t.theta, t.action, {}};
            Process target = t.cont;
            if (t.action.is_bound()) {
                e.bound_name = Name::nabla(d + 1);
                target = instantiate(t.cont, e.bound_name);
            }
            e.to = intern(apply(t.theta, target));
            g.edges.push_back(std::move(e));
        }
    }
    return g;
}

std::string pretty(const Substitution& theta, const NameEnv& env) {
    std::string s = "{";
    bool first = true;
    for (const auto& [var, value] : theta.bindings()) {
        if (!first) s += ", ";
        first = false;
        s += env.name_of(var) + ":=" + env.name_of(value);
    }
    return s + "}";
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string to_dot(const LtsGraph& g, const NameEnv& env) {
    std::string s = "digraph lts {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < g.states.size(); ++i)
        s += "  s" + std::to_string(i) + " [label=\"" + dot_escape(pretty(g.states[i], env)) + "\"];\n";
    for (const auto& e : g.edges) {
        std::string binder = e.action.is_bound() ? env.name_of(e.bound_name) : "y";
        s += "  s" + std::to_string(e.from) + " -> s" + std::to_string(e.to) + " [label=\"" +
             dot_escape(pretty(e.action, env, binder) + " ; " + pretty(e.theta, env)) + "\"];\n";
    }
    return s + "}\n";
}

}  // namespace pisym
