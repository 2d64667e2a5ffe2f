#include "pisym/unify.hpp"

#include "pisym/errors.hpp"

namespace pisym {

Substitution Substitution::single(const Name& var, const Name& value) {
    Substitution s;
    s.bind(var, value);
    return s;
}

Name Substitution::operator()(const Name& n) const {
    if (!n.is_eigen()) return n;
    auto it = map_.find(n.index);
    return it == map_.end() ? n : it->second.value;
}

std::vector<std::pair<Name, Name>> Substitution::bindings() const {
    std::vector<std::pair<Name, Name>> out;
    out.reserve(map_.size());
    for (const auto& [id, e] : map_) out.emplace_back(e.var, e.value);
    return out;
}

void Substitution::bind(const Name& var, const Name& value) {
    if (!var.is_eigen()) throw InternalError("substitution domain must be an eigenvariable");
    map_[var.index] = Entry{var, value};
    normalize();
}

void Substitution::normalize() {
    // Chase chains; the bound on steps guards against cycles, which
    // would mean two variables were bound to each other.
    for (auto it = map_.begin(); it != map_.end();) {
        Name v = it->second.value;
        std::size_t steps = 0;
        while (v.is_eigen()) {
            auto nx = map_.find(v.index);
            if (nx == map_.end() || nx == it) break;
            v = nx->second.value;
            if (++steps > map_.size()) throw InternalError("cyclic substitution");
        }
        it->second.value = v;
        if (v.is_eigen() && v.index == it->first)
            it = map_.erase(it);
        else
            ++it;
    }
}

void Distinction::add(const Name& a, const Name& b) {
    if (a == b) return;
    pairs_.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
}

bool Distinction::contains(const Name& a, const Name& b) const {
    return pairs_.count(a < b ? std::make_pair(a, b) : std::make_pair(b, a)) != 0;
}

std::optional<Substitution> unify_names(const Name& a, const Name& b) {
    if (a.is_bound() || a.is_free() || b.is_bound() || b.is_free())
        throw InternalError("unify_names expects nabla or eigen names");
    if (a == b) return Substitution{};
    if (a.is_nabla() && b.is_nabla()) return std::nullopt;
    if (a.is_eigen() && b.is_nabla()) {
        if (b.index > a.ceiling) return std::nullopt;
        return Substitution::single(a, b);
    }
    if (a.is_nabla()) return unify_names(b, a);
    // Two eigenvariables: the one allowed to see more levels takes the
    // other's value; on a tie the smaller id is bound to the larger.
    const bool a_goes = a.ceiling > b.ceiling || (a.ceiling == b.ceiling && a.index < b.index);
    return a_goes ? Substitution::single(a, b) : Substitution::single(b, a);
}

Substitution compose(const Substitution& outer, const Substitution& inner) {
    Substitution out = outer;
    for (const auto& [var, value] : inner.bindings()) {
        // inner's bindings win on their own domain
        out.bind(var, outer(value));
    }
    // bind() normalized after each insertion; re-running over the
    // outer-only entries keeps the result independent of order.
    Substitution fixed;
    for (const auto& [var, value] : out.bindings()) fixed.bind(var, out(value));
    return fixed;
}

bool respects(const Substitution& theta, const Distinction& d) {
    for (const auto& [x, y] : d.pairs())
        if (theta(x) == theta(y)) return false;
    return true;
}

Name apply(const Substitution& theta, const Name& n) { return theta(n); }

Action apply(const Substitution& theta, const Action& a) {
    Action out = a;
    if (a.kind != ActionKind::Tau) out.channel = theta(a.channel);
    if (a.has_object()) out.object = theta(a.object);
    return out;
}

Process apply(const Substitution& theta, const Process& p) {
    if (theta.is_identity()) return p;
    return map_names(p, [&](const Name& n) { return theta(n); });
}

Distinction apply(const Substitution& theta, const Distinction& d) {
    Distinction out;
    for (const auto& [x, y] : d.pairs()) out.add(theta(x), theta(y));
    return out;
}

std::string debug_string(const Substitution& theta) {
    std::string s = "{";
    bool first = true;
    for (const auto& [var, value] : theta.bindings()) {
        if (!first) s += ", ";
        first = false;
        s += debug_string(var) + ":=" + debug_string(value);
    }
    return s + "}";
}

}  // namespace pisym
