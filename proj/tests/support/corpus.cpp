#include "corpus.hpp"

#include <algorithm>
#include <map>

namespace corpus {

using pisym::Action;
using pisym::Formula;
using pisym::FormulaKind;
using pisym::Name;
using pisym::ProcKind;
using pisym::Process;

namespace {

std::vector<Name> scope_names(std::uint32_t free_names, std::uint32_t bound) {
    std::vector<Name> out;
    for (std::uint32_t i = 1; i <= free_names; ++i) out.push_back(Name::nabla(i));
    for (std::uint32_t i = 0; i < bound; ++i) out.push_back(Name::bound(i));
    return out;
}

using Cache = std::map<std::pair<std::size_t, std::uint32_t>, std::vector<Process>>;

const std::vector<Process>& gen(std::size_t w, std::uint32_t bound, std::uint32_t fn, Cache& cache) {
    auto key = std::make_pair(w, bound);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::vector<Process> out;
    if (w == 0) {
        out.push_back(Process::nil());
    } else {
        const auto names = scope_names(fn, bound);
        for (const auto& c : gen(w - 1, bound, fn, cache)) out.push_back(Process::tau(c));
        for (const Name& x : names)
            for (const Name& y : names)
                for (const auto& c : gen(w - 1, bound, fn, cache)) out.push_back(Process::out(x, y, c));
        for (std::size_t i = 0; i < names.size(); ++i)
            for (std::size_t j = i + 1; j < names.size(); ++j)
                for (const auto& c : gen(w - 1, bound, fn, cache)) out.push_back(Process::match(names[i], names[j], c));
        for (const Name& x : names)
            for (const auto& c : gen(w - 1, bound + 1, fn, cache)) out.push_back(Process::in(x, c));
        for (const auto& c : gen(w - 1, bound + 1, fn, cache)) out.push_back(Process::nu(c));
        for (std::size_t i = 1; i + 1 < w; ++i) {
            const auto& ls = gen(i, bound, fn, cache);
            const auto& rs = gen(w - 1 - i, bound, fn, cache);
            for (const auto& l : ls)
                for (const auto& r : rs) {
                    out.push_back(Process::sum(l, r));
                    out.push_back(Process::par(l, r));
                }
        }
    }
    return cache.emplace(key, std::move(out)).first->second;
}

// Free nabla levels in order of first appearance.
void first_use(const Process& p, std::vector<std::uint32_t>& seen) {
    auto see = [&](const Name& n) {
        if (n.is_nabla() && std::find(seen.begin(), seen.end(), n.index) == seen.end()) seen.push_back(n.index);
    };
    switch (p.kind()) {
    case ProcKind::Nil: return;
    case ProcKind::Out:
    case ProcKind::Match:
        see(p.channel());
        see(p.object());
        first_use(p.cont(), seen);
        return;
    case ProcKind::In:
        see(p.channel());
        first_use(p.cont(), seen);
        return;
    case ProcKind::Sum:
    case ProcKind::Par:
        first_use(p.lhs(), seen);
        first_use(p.rhs(), seen);
        return;
    default: first_use(p.cont(), seen);
    }
}

bool canonical(const Process& p) {
    std::vector<std::uint32_t> seen;
    first_use(p, seen);
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (seen[i] != i + 1) return false;
    return true;
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

std::size_t below(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

Process rnd(Rng& rng, std::size_t budget, std::uint32_t bound, std::uint32_t fn) {
    if (budget == 0 || below(rng, 6) == 0) return Process::nil();
    const auto names = scope_names(fn, bound);
    switch (below(rng, 9)) {
    case 0: return Process::tau(rnd(rng, budget - 1, bound, fn));
    case 1:
    case 2: return Process::out(pick(rng, names), pick(rng, names), rnd(rng, budget - 1, bound, fn));
    case 3:
    case 4: return Process::in(pick(rng, names), rnd(rng, budget - 1, bound + 1, fn));
    case 5: return Process::match(pick(rng, names), pick(rng, names), rnd(rng, budget, bound, fn));
    case 6: return Process::nu(rnd(rng, budget, bound + 1, fn));
    default: {
        const std::size_t left = below(rng, budget + 1);
        Process l = rnd(rng, left, bound, fn), r = rnd(rng, budget - left, bound, fn);
        return below(rng, 2) ? Process::sum(l, r) : Process::par(l, r);
    }
    }
}

bool is_prefix(const Process& p) {
    return p.kind() == ProcKind::Tau || p.kind() == ProcKind::Out || p.kind() == ProcKind::In;
}

bool binds(const Process& p) { return p.kind() == ProcKind::In; }

Process with_cont(const Process& p, const Process& c) {
    switch (p.kind()) {
    case ProcKind::Tau: return Process::tau(c);
    case ProcKind::Out: return Process::out(p.channel(), p.object(), c);
    case ProcKind::In: return Process::in(p.channel(), c, p.hint());
    default: return p;
    }
}

// Expansion law for a parallel pair of prefixes.
Process expand(const Process& l, const Process& r) {
    std::vector<Process> parts;
    parts.push_back(with_cont(l, Process::par(l.cont(), binds(l) ? pisym::shift(r, 1) : r)));
    parts.push_back(with_cont(r, Process::par(binds(r) ? pisym::shift(l, 1) : l, r.cont())));
    auto comm = [&](const Process& o, const Process& i, bool out_left) {
        if (o.kind() != ProcKind::Out || i.kind() != ProcKind::In || o.channel() != i.channel()) return;
        Process got = pisym::instantiate(i.cont(), o.object());
        parts.push_back(Process::tau(out_left ? Process::par(o.cont(), got) : Process::par(got, o.cont())));
    };
    comm(l, r, true);
    comm(r, l, false);
    Process s = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) s = Process::sum(parts[i], s);
    return s;
}

// Rewrites one node chosen uniformly among `p`'s nodes.
Process mutate_at(Rng& rng, const Process& p, std::size_t& target, std::uint32_t bound, std::uint32_t fn) {
    if (target-- == 0) {
        switch (below(rng, 5)) {
        case 0:
            if (p.kind() == ProcKind::Sum) return Process::sum(p.rhs(), p.lhs());
            if (p.kind() == ProcKind::Par) return Process::par(p.rhs(), p.lhs());
            return Process::sum(p, p);
        case 1:
            if (p.kind() == ProcKind::Par && is_prefix(p.lhs()) && is_prefix(p.rhs())) return expand(p.lhs(), p.rhs());
            return Process::sum(p, p);
        case 2: return Process::sum(p, p);
        case 3: return Process::sum(p, rnd(rng, 1, bound, fn));
        default: return rnd(rng, 2, bound, fn);
        }
    }
    switch (p.kind()) {
    case ProcKind::Nil: return p;
    case ProcKind::Tau: return Process::tau(mutate_at(rng, p.cont(), target, bound, fn));
    case ProcKind::Out: return Process::out(p.channel(), p.object(), mutate_at(rng, p.cont(), target, bound, fn));
    case ProcKind::Match: return Process::match(p.channel(), p.object(), mutate_at(rng, p.cont(), target, bound, fn));
    case ProcKind::In: return Process::in(p.channel(), mutate_at(rng, p.cont(), target, bound + 1, fn), p.hint());
    case ProcKind::Nu: return Process::nu(mutate_at(rng, p.cont(), target, bound + 1, fn), p.hint());
    case ProcKind::Sum: {
        Process l = mutate_at(rng, p.lhs(), target, bound, fn);
        return Process::sum(l, mutate_at(rng, p.rhs(), target, bound, fn));
    }
    case ProcKind::Par: {
        Process l = mutate_at(rng, p.lhs(), target, bound, fn);
        return Process::par(l, mutate_at(rng, p.rhs(), target, bound, fn));
    }
    case ProcKind::Bang: return p;
    }
    return p;
}

std::vector<Name> with_bound(const std::vector<Name>& names, std::uint32_t bound) {
    std::vector<Name> out = names;
    for (std::uint32_t i = 0; i < bound; ++i) out.push_back(Name::bound(i));
    return out;
}

Formula rnd_formula(Rng& rng, std::size_t depth, const std::vector<Name>& free, std::uint32_t bound, bool lm) {
    const auto names = with_bound(free, bound);
    const std::size_t choice = below(rng, depth == 0 ? 4 : 12);
    auto sub = [&](std::uint32_t b) { return rnd_formula(rng, depth ? depth - 1 : 0, free, b, lm); };
    switch (choice) {
    case 0: return Formula::truth();
    case 1: return Formula::falsity();
    case 2: return Formula::conj(rnd_formula(rng, depth, free, bound, lm), depth ? sub(bound) : Formula::truth());
    case 3: return Formula::disj(sub(bound), below(rng, 2) ? Formula::falsity() : Formula::truth());
    case 4: return below(rng, 2) ? Formula::match_box(pick(rng, names), pick(rng, names), sub(bound))
                                 : Formula::match_dia(pick(rng, names), pick(rng, names), sub(bound));
    case 5: return Formula::act(below(rng, 2), Action::tau(), sub(bound));
    case 6:
        return Formula::act(below(rng, 2), Action::free_out(pick(rng, names), pick(rng, names)), sub(bound));
    case 7:
        return Formula::bound(below(rng, 2) ? FormulaKind::OutDia : FormulaKind::OutBox, pick(rng, names),
                              sub(bound + 1));
    case 8:
    case 9:
        return Formula::bound(below(rng, 2) ? FormulaKind::InDiaL : FormulaKind::InBoxL, pick(rng, names),
                              sub(bound + 1));
    default: {
        if (lm)
            return Formula::bound(below(rng, 2) ? FormulaKind::InDiaL : FormulaKind::InBoxL, pick(rng, names),
                                  sub(bound + 1));
        static const FormulaKind kinds[] = {FormulaKind::InDia, FormulaKind::InBox, FormulaKind::InDiaE,
                                            FormulaKind::InBoxE};
        return Formula::bound(kinds[below(rng, 4)], pick(rng, names), sub(bound + 1));
    }
    }
}

void lm_into(std::size_t depth, const std::vector<Name>& free, std::uint32_t bound, std::vector<Formula>& out) {
    out.push_back(Formula::truth());
    out.push_back(Formula::falsity());
    if (depth == 0) return;
    std::vector<Formula> inner, inner_b;
    lm_into(depth - 1, free, bound, inner);
    lm_into(depth - 1, free, bound + 1, inner_b);
    const auto names = with_bound(free, bound);
    for (const auto& f : inner) {
        for (bool dia : {true, false}) {
            out.push_back(Formula::act(dia, Action::tau(), f));
            for (const Name& x : names)
                for (const Name& y : names) out.push_back(Formula::act(dia, Action::free_out(x, y), f));
        }
        for (std::size_t i = 0; i < names.size(); ++i)
            for (std::size_t j = i + 1; j < names.size(); ++j) {
                out.push_back(Formula::match_box(names[i], names[j], f));
                out.push_back(Formula::match_dia(names[i], names[j], f));
            }
    }
    for (const auto& f : inner_b)
        for (const Name& x : names)
            for (auto k : {FormulaKind::OutDia, FormulaKind::OutBox, FormulaKind::InDiaL, FormulaKind::InBoxL})
                out.push_back(Formula::bound(k, x, f));
}

}  // namespace

std::vector<Process> exhaustive(std::size_t weight, std::uint32_t free_names) {
    Cache cache;
    std::vector<Process> out;
    for (const auto& p : gen(weight, 0, free_names, cache))
        if (canonical(p)) out.push_back(p);
    return out;
}

Process random_process(Rng& rng, std::size_t prefixes, std::uint32_t free_names) {
    return rnd(rng, prefixes, 0, free_names);
}

Process mutate(Rng& rng, const Process& p, std::uint32_t free_names) {
    std::size_t target = below(rng, pisym::size(p));
    return mutate_at(rng, p, target, 0, free_names);
}

Process rename_free(const Process& p, const std::vector<Name>& names) {
    return pisym::map_names(p, [&](const Name& n) { return n.is_nabla() ? names.at(n.index - 1) : n; });
}

Formula random_formula(Rng& rng, std::size_t depth, const std::vector<Name>& names, bool lm_only) {
    return rnd_formula(rng, depth, names, 0, lm_only);
}

std::vector<Formula> lm_formulas(std::size_t depth, const std::vector<Name>& names) {
    std::vector<Formula> out;
    lm_into(depth, names, 0, out);
    return out;
}

}  // namespace corpus
