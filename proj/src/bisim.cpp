#include "pisym/bisim.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "pisym/errors.hpp"

namespace pisym {

std::string to_string(BisimMode m) {
    switch (m) {
    case BisimMode::Open: return "open";
    case BisimMode::OpenEarly: return "open-early";
    case BisimMode::Late: return "late";
    case BisimMode::Early: return "early";
    }
    return "?";
}

BisimMode parse_mode(std::string_view s) {
    if (s == "open") return BisimMode::Open;
    if (s == "open-early") return BisimMode::OpenEarly;
    if (s == "late") return BisimMode::Late;
    if (s == "early") return BisimMode::Early;
    throw UsageError("unknown bisimulation mode '" + std::string(s) + "'");
}

GoalContext GoalContext::from_prefix(const Prefix& prefix, const Distinction& extra) {
    GoalContext c;
    c.nabla_depth = prefix.nabla_count();
    c.next_eigen = prefix.forall_count() + 1;
    c.distinction = extra;
    return c;
}

namespace {

bool is_ground_mode(BisimMode m) { return m == BisimMode::Late || m == BisimMode::Early; }

struct Goal {
    Process x, y;  // left, right
    GoalContext ctx;

    Goal swapped() const { return {y, x, ctx}; }
};

// Non-bound names in order of first occurrence.
void names_in_order(const Process& p, std::vector<Name>& out) {
    auto see = [&](const Name& n) {
        if (!n.is_bound() && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    };
    switch (p.kind()) {
    case ProcKind::Nil:
        return;
    case ProcKind::Out:
    case ProcKind::Match:
        see(p.channel());
        see(p.object());
        names_in_order(p.cont(), out);
        return;
    case ProcKind::In:
        see(p.channel());
        names_in_order(p.cont(), out);
        return;
    case ProcKind::Sum:
    case ProcKind::Par:
        names_in_order(p.lhs(), out);
        names_in_order(p.rhs(), out);
        return;
    default:
        names_in_order(p.cont(), out);
    }
}

struct Key {
    Process x, y;
    std::vector<std::pair<Name, Name>> pairs;
    std::vector<std::uint32_t> ceilings;
    std::uint32_t depth = 0;

    friend bool operator==(const Key& a, const Key& b) {
        return a.depth == b.depth && a.x == b.x && a.y == b.y && a.pairs == b.pairs && a.ceilings == b.ceilings;
    }
};

struct KeyHash {
    std::size_t operator()(const Key& k) const {
        std::size_t h = k.x.hash() * 31 + k.y.hash();
        h = h * 1000003 + k.depth;
        for (auto c : k.ceilings) h = h * 131 + c;
        for (const auto& [a, b] : k.pairs) h = h * 1000033 + a.hash() + 7 * b.hash();
        return h;
    }
};

// Goal up to renaming: eigenvariables (open modes) or nabla levels
// (ground modes) numbered by first occurrence; distinction pairs about
// names that no longer occur are dropped.
Key make_key(const Goal& g, BisimMode mode, bool rename) {
    std::vector<Name> order;
    names_in_order(g.x, order);
    names_in_order(g.y, order);
    Key k;
    std::unordered_map<Name, Name, NameHash> ren;
    std::uint32_t next = 0;
    const bool ground = is_ground_mode(mode);
    for (const Name& n : order) {
        if (n.is_eigen()) k.ceilings.push_back(n.ceiling);
        if (!rename) continue;
        if (ground && n.is_nabla()) ren[n] = Name::nabla(++next);
        if (!ground && n.is_eigen()) ren[n] = Name::eigen(++next, n.ceiling);
    }
    auto f = [&](const Name& n) {
        auto it = ren.find(n);
        return it == ren.end() ? n : it->second;
    };
    k.x = rename ? map_names(g.x, f) : g.x;
    k.y = rename ? map_names(g.y, f) : g.y;
    k.depth = rename && ground ? next : g.ctx.nabla_depth;
    if (!rename) k.depth = g.ctx.nabla_depth * 65536 + g.ctx.next_eigen;
    for (const auto& [a, b] : g.ctx.distinction.pairs()) {
        if (std::find(order.begin(), order.end(), a) == order.end()) continue;
        if (std::find(order.begin(), order.end(), b) == order.end()) continue;
        Name c = f(a), d = f(b);
        k.pairs.push_back(c < d ? std::make_pair(c, d) : std::make_pair(d, c));
    }
    std::sort(k.pairs.begin(), k.pairs.end());
    return k;
}

struct Attack {
    Side side;
    std::size_t index;
    Transition t;
};

struct Reply {
    std::size_t index;
    Transition t;
};

class Game {
public:
    Game(BisimMode mode, const BisimOptions& opts) : mode_(mode), opts_(opts) {}

    BisimStats stats;

    bool verdict(const Goal& g, std::size_t level = 0) {
        if (opts_.max_depth && level > *opts_.max_depth) throw DepthBudgetExceeded(*opts_.max_depth);
        Key k = make_key(g, mode_, true);
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;
        ++stats.goals;
        bool ok = true;
        for (const auto& a : attacks(g)) {
            ++stats.branches;
            if (!answered(g, a, level)) {
                ok = false;
                break;
            }
        }
        memo_.emplace(std::move(k), ok);
        return ok;
    }

    std::vector<Attack> attacks(const Goal& g) const {
        std::vector<Attack> out;
        const auto l = successors(g.x, g.ctx.nabla_depth);
        for (std::size_t i = 0; i < l.size(); ++i) out.push_back({Side::Left, i, l[i]});
        const auto r = successors(g.y, g.ctx.nabla_depth);
        for (std::size_t i = 0; i < r.size(); ++i) out.push_back({Side::Right, i, r[i]});
        return out;
    }

    bool discharged(const Goal& g, const Attack& a) const { return !respects(a.t.theta, g.ctx.distinction); }

    // Replies of the other process, under the move's substitution, that
    // need no instantiation and carry exactly the same action.
    std::vector<Reply> candidates(const Goal& g, const Attack& a) const {
        const Process& other = a.side == Side::Left ? g.y : g.x;
        const auto succ = successors(apply(a.t.theta, other), g.ctx.nabla_depth);
        std::vector<Reply> out;
        for (std::size_t i = 0; i < succ.size(); ++i)
            if (succ[i].theta.is_identity() && succ[i].action == a.t.action) out.push_back({i, succ[i]});
        return out;
    }

    // Names an input binder is compared at.
    std::vector<Name> input_cases(const Goal& g) const {
        if (!is_ground_mode(mode_)) return {Name::eigen(g.ctx.next_eigen, g.ctx.nabla_depth)};
        std::set<Name> fn;
        for (const Name& n : free_names(g.x)) fn.insert(n);
        for (const Name& n : free_names(g.y)) fn.insert(n);
        std::vector<Name> out(fn.begin(), fn.end());
        out.push_back(Name::nabla(g.ctx.nabla_depth + 1));
        return out;
    }

    Name output_name(const Goal& g) const { return Name::nabla(g.ctx.nabla_depth + 1); }

    Goal sub(const Goal& g, const Attack& a, const Reply& r, std::optional<Name> w) const {
        Goal out;
        out.ctx = g.ctx;
        out.ctx.distinction = apply(a.t.theta, g.ctx.distinction);
        Process mine = a.t.cont, theirs = r.t.cont;
        if (a.t.action.is_bound()) {
            if (!w) throw InternalError("bound move without a name");
            mine = instantiate(mine, *w);
            theirs = instantiate(theirs, *w);
            if (w->is_nabla() && w->index > g.ctx.nabla_depth) out.ctx.nabla_depth = w->index;
            if (w->is_eigen() && w->index >= g.ctx.next_eigen) out.ctx.next_eigen = w->index + 1;
        }
        if (a.side == Side::Left) {
            out.x = mine;
            out.y = theirs;
        } else {
            out.x = theirs;
            out.y = mine;
        }
        return out;
    }

    bool answered(const Goal& g, const Attack& a, std::size_t level = 0) {
        if (discharged(g, a)) return true;
        const auto cands = candidates(g, a);
        auto ok = [&](const Reply& r, std::optional<Name> w) { return verdict(sub(g, a, r, w), level + 1); };
        switch (a.t.action.kind) {
        case ActionKind::BoundOut: {
            const Name w = output_name(g);
            return std::any_of(cands.begin(), cands.end(), [&](const Reply& r) { return ok(r, w); });
        }
        case ActionKind::BoundIn: {
            const auto cases = input_cases(g);
            if (mode_ == BisimMode::Early)
                return std::all_of(cases.begin(), cases.end(), [&](const Name& w) {
                    return std::any_of(cands.begin(), cands.end(), [&](const Reply& r) { return ok(r, w); });
                });
            return std::any_of(cands.begin(), cands.end(), [&](const Reply& r) {
                return std::all_of(cases.begin(), cases.end(), [&](const Name& w) { return ok(r, w); });
            });
        }
        default:
            return std::any_of(cands.begin(), cands.end(), [&](const Reply& r) { return ok(r, std::nullopt); });
        }
    }

    // -- refutation trace ------------------------------------------------

    void witness(const Goal& g, std::vector<WitnessStep>& steps) {
        for (const auto& a : attacks(g)) {
            if (answered(g, a)) continue;
            const auto cands = candidates(g, a);
            WitnessStep st;
            st.side = a.side;
            st.transition = a.index;
            st.action = a.t.action;
            st.theta = a.t.theta;
            st.candidates = cands.size();
            if (cands.empty()) {
                steps.push_back(st);
                return;
            }
            std::optional<Name> w;
            std::size_t pick = 0;
            if (a.t.action.kind == ActionKind::BoundOut) w = output_name(g);
            if (a.t.action.kind == ActionKind::BoundIn) {
                const auto cases = input_cases(g);
                if (mode_ == BisimMode::Early) {
                    for (const Name& c : cases)
                        if (std::none_of(cands.begin(), cands.end(),
                                         [&](const Reply& r) { return verdict(sub(g, a, r, c)); })) {
                            w = c;
                            break;
                        }
                } else {
                    for (const Name& c : cases)
                        if (!verdict(sub(g, a, cands[0], c))) {
                            w = c;
                            break;
                        }
                }
                if (!w) throw InternalError("refuted input move without a failing name");
            }
            st.response = cands[pick].index;
            st.instantiation = w;
            steps.push_back(st);
            witness(sub(g, a, cands[pick], w), steps);
            return;
        }
        throw InternalError("refuted goal with every move answered");
    }

    // -- bisimulation certificate -------------------------------------------

    void certificate(const Goal& g, std::unordered_set<Key, KeyHash>& seen, std::vector<CertificateEntry>& out) {
        if (!seen.insert(make_key(g, mode_, true)).second) return;
        out.push_back({g.ctx, g.x, g.y});
        for (const auto& a : attacks(g)) {
            if (discharged(g, a)) continue;
            const auto cands = candidates(g, a);
            auto follow = [&](const Reply& r, std::optional<Name> w) {
                Goal s = sub(g, a, r, w);
                if (!verdict(s)) return false;
                certificate(s, seen, out);
                return true;
            };
            if (a.t.action.kind == ActionKind::BoundIn) {
                const auto cases = input_cases(g);
                if (mode_ == BisimMode::Early) {
                    for (const Name& w : cases)
                        for (const auto& r : cands)
                            if (follow(r, w)) break;
                } else {
                    for (const auto& r : cands) {
                        bool all = std::all_of(cases.begin(), cases.end(),
                                               [&](const Name& w) { return verdict(sub(g, a, r, w)); });
                        if (!all) continue;
                        for (const Name& w : cases) follow(r, w);
                        break;
                    }
                }
                continue;
            }
            std::optional<Name> w;
            if (a.t.action.kind == ActionKind::BoundOut) w = output_name(g);
            for (const auto& r : cands)
                if (follow(r, w)) break;
        }
    }

    BisimMode mode() const { return mode_; }

private:
    BisimMode mode_;
    BisimOptions opts_;
    std::unordered_map<Key, bool, KeyHash> memo_;
};

// -- separating formulas: ground modes ------------------------------------------

class GroundSeparator {
public:
    explicit GroundSeparator(Game& game) : game_(game) {}

    // Formula true of g.x and false of g.y; g must be refuted.
    Formula sep(const Goal& g) {
        for (const auto& a : game_.attacks(g)) {
            if (game_.answered(g, a)) continue;
            if (a.side == Side::Right) return dual(sep(g.swapped()));
            return left_move(g, a);
        }
        throw InternalError("refuted goal with every move answered");
    }

private:
    Formula left_move(const Goal& g, const Attack& a) {
        const auto cands = game_.candidates(g, a);
        const Action& act = a.t.action;
        std::vector<Formula> parts;
        switch (act.kind) {
        case ActionKind::Tau:
        case ActionKind::FreeOut:
            for (const auto& r : cands) parts.push_back(sep(game_.sub(g, a, r, std::nullopt)));
            return Formula::act(true, act, Formula::conj(parts));
        case ActionKind::BoundOut: {
            const Name w = game_.output_name(g);
            for (const auto& r : cands) parts.push_back(abstract(sep(game_.sub(g, a, r, w)), w));
            return Formula::bound(FormulaKind::OutDia, act.channel, Formula::conj(parts));
        }
        case ActionKind::BoundIn: {
            const auto cases = game_.input_cases(g);
            const Name fresh = cases.back();
            const Name y = Name::bound(0);
            for (const auto& r : cands) {
                const Name* bad = nullptr;
                for (const Name& c : cases)
                    if (!game_.verdict(game_.sub(g, a, r, c))) {
                        bad = &c;
                        break;
                    }
                if (!bad) throw InternalError("late input reply without a failing name");
                Formula f = sep(game_.sub(g, a, r, *bad));
                if (*bad != fresh) {
                    parts.push_back(Formula::match_box(y, *bad, f));
                } else {
                    // known names are harmless; a new one behaves like `fresh`
                    std::vector<Formula> alts;
                    for (std::size_t i = 0; i + 1 < cases.size(); ++i)
                        alts.push_back(Formula::match_dia(y, cases[i], Formula::truth()));
                    alts.push_back(abstract(f, fresh));
                    parts.push_back(Formula::disj(alts));
                }
            }
            return Formula::bound(FormulaKind::InDiaL, act.channel, Formula::conj(parts));
        }
        case ActionKind::FreeIn:
            break;
        }
        throw InternalError("free input move");
    }

    Game& game_;
};

// -- separating formulas: open modes -----------------------------------------------

Formula guarded(const Substitution& theta, Formula f) {
    const auto b = theta.bindings();
    for (auto it = b.rbegin(); it != b.rend(); ++it) f = Formula::match_box(it->first, it->second, f);
    return f;
}

struct Separators {
    std::optional<Formula> left;   // holds for g.x only
    std::optional<Formula> right;  // holds for g.y only
};

class OpenSeparator {
public:
    explicit OpenSeparator(Game& game) : game_(game) {}

    Separators sep(const Goal& g) {
        Key k = make_key(g, game_.mode(), false);
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;
        Separators out;
        for (const auto& a : game_.attacks(g)) {
            if (out.left && out.right) break;
            if (game_.answered(g, a)) continue;
            auto [mover_f, other_f] = move(g, a);
            auto& mover_slot = a.side == Side::Left ? out.left : out.right;
            auto& other_slot = a.side == Side::Left ? out.right : out.left;
            if (!mover_slot && mover_f) mover_slot = mover_f;
            if (!other_slot && other_f) other_slot = other_f;
        }
        memo_.emplace(std::move(k), out);
        return out;
    }

private:
    // Diamond on the move (holds for the mover), and box on the move
    // (holds for the other process).
    std::pair<std::optional<Formula>, std::optional<Formula>> move(const Goal& g, const Attack& a) {
        const auto cands = game_.candidates(g, a);
        const Action& act = a.t.action;
        std::optional<Name> w;
        if (act.kind == ActionKind::BoundOut) w = game_.output_name(g);
        if (act.kind == ActionKind::BoundIn) w = game_.input_cases(g).front();

        std::vector<Formula> mine, theirs;
        bool have_mine = true, have_theirs = true;
        for (const auto& r : cands) {
            Separators s = sep(game_.sub(g, a, r, w));
            const auto& m = a.side == Side::Left ? s.left : s.right;
            const auto& t = a.side == Side::Left ? s.right : s.left;
            if (m)
                mine.push_back(w ? abstract(*m, *w) : *m);
            else
                have_mine = false;
            if (t)
                theirs.push_back(w ? abstract(*t, *w) : *t);
            else
                have_theirs = false;
        }

        std::optional<Formula> dia, box;
        if (have_mine) {
            Formula body = Formula::conj(mine);
            Formula f;
            switch (act.kind) {
            case ActionKind::BoundOut: f = Formula::bound(FormulaKind::OutDia, act.channel, body); break;
            case ActionKind::BoundIn: f = Formula::bound(FormulaKind::InDiaL, act.channel, body); break;
            default: f = Formula::act(true, act, body); break;
            }
            dia = guarded(a.t.theta, f);
        }
        if (have_theirs) {
            // other process's branches that only match after an
            // instantiation are closed by a trivially true equation
            const Process& other = a.side == Side::Left ? g.y : g.x;
            const Distinction d = apply(a.t.theta, g.ctx.distinction);
            std::vector<Formula> extra;
            for (const auto& t : successors(apply(a.t.theta, other), g.ctx.nabla_depth)) {
                auto u = unify_actions(t.action, act);
                if (!u) continue;
                const Substitution total = compose(*u, t.theta);
                if (total.is_identity() || !respects(total, d)) continue;
                const auto b = total.bindings().front();
                Formula e = Formula::match_dia(b.first, b.second, Formula::truth());
                if (std::find(extra.begin(), extra.end(), e) == extra.end()) extra.push_back(e);
            }
            std::vector<Formula> alts = theirs;
            alts.insert(alts.end(), extra.begin(), extra.end());
            Formula body = Formula::disj(alts);
            Formula f;
            switch (act.kind) {
            case ActionKind::BoundOut: f = Formula::bound(FormulaKind::OutBox, act.channel, body); break;
            case ActionKind::BoundIn: f = Formula::bound(FormulaKind::InBoxL, act.channel, body); break;
            default: f = Formula::act(false, act, body); break;
            }
            box = guarded(a.t.theta, f);
        }
        return {dia, box};
    }

    Game& game_;
    std::unordered_map<Key, Separators, KeyHash> memo_;
};

std::optional<std::pair<Formula, Side>> extract(BisimMode mode, const Goal& root, const BisimOptions& opts) {
    if (is_ground_mode(mode)) {
        // early refutations are late refutations too
        Game late(BisimMode::Late, opts);
        if (late.verdict(root)) return std::nullopt;
        return std::make_pair(GroundSeparator(late).sep(root), Side::Left);
    }
    Game game(mode, opts);
    if (game.verdict(root)) return std::nullopt;
    Separators s = OpenSeparator(game).sep(root);
    if (s.left) return std::make_pair(*s.left, Side::Left);
    if (s.right) return std::make_pair(*s.right, Side::Right);
    return std::nullopt;
}

void check_input(BisimMode mode, const Process& l, const Process& r) {
    if (contains_bang(l) || contains_bang(r)) throw ReplicationUnsupported();
    if (is_ground_mode(mode)) {
        for (const Process* p : {&l, &r})
            for (const Name& n : free_names(*p))
                if (!n.is_nabla())
                    throw UsageError("late and early checking need every free name to be a nabla constant");
    }
    for (const Process* p : {&l, &r})
        for (const Name& n : free_names(*p))
            if (n.is_free()) throw UsageError("process has unresolved names; encode it first");
}

GoalContext settle(GoalContext ctx, const Process& l, const Process& r) {
    ctx.nabla_depth = std::max({ctx.nabla_depth, max_level(l), max_level(r)});
    ctx.next_eigen = std::max({ctx.next_eigen, max_eigen_id(l) + 1, max_eigen_id(r) + 1});
    for (const auto& [a, b] : ctx.distinction.pairs())
        for (const Name& n : {a, b}) {
            if (n.is_eigen()) ctx.next_eigen = std::max(ctx.next_eigen, n.index + 1);
            if (n.is_nabla()) ctx.nabla_depth = std::max(ctx.nabla_depth, n.index);
        }
    return ctx;
}

}  // namespace

BisimResult bisim(BisimMode mode, const Process& left, const Process& right, const GoalContext& ctx,
                  const BisimOptions& opts) {
    check_input(mode, left, right);
    Goal root{left, right, settle(ctx, left, right)};
    if (is_ground_mode(mode)) root.ctx.distinction = {};
    Game game(mode, opts);
    BisimResult res;
    res.bisimilar = game.verdict(root);
    if (res.bisimilar) {
        if (opts.certificate) {
            std::unordered_set<Key, KeyHash> seen;
            game.certificate(root, seen, res.certificate);
        }
    } else {
        Witness w;
        w.mode = mode;
        w.left = left;
        w.right = right;
        w.context = root.ctx;
        game.witness(root, w.steps);
        if (opts.extract_formula) {
            BisimOptions quiet = opts;
            if (auto f = extract(mode, root, quiet)) {
                w.formula = f->first;
                w.formula_side = f->second;
            }
        }
        res.witness = std::move(w);
    }
    res.stats = game.stats;
    return res;
}

BisimResult open_bisim(const Process& left, const Process& right, const GoalContext& ctx, const BisimOptions& opts) {
    return bisim(BisimMode::Open, left, right, ctx, opts);
}

BisimResult late_bisim(const Process& left, const Process& right, std::uint32_t depth, const BisimOptions& opts) {
    GoalContext ctx;
    ctx.nabla_depth = depth;
    return bisim(BisimMode::Late, left, right, ctx, opts);
}

BisimResult early_bisim(const Process& left, const Process& right, std::uint32_t depth, const BisimOptions& opts) {
    GoalContext ctx;
    ctx.nabla_depth = depth;
    return bisim(BisimMode::Early, left, right, ctx, opts);
}

void replay(const Witness& w) {
    if (w.steps.empty()) throw WitnessMalformed("empty witness");
    check_input(w.mode, w.left, w.right);
    Game game(w.mode, {});
    Goal g{w.left, w.right, w.context};
    for (std::size_t i = 0; i < w.steps.size(); ++i) {
        const auto& st = w.steps[i];
        const std::string at = "step " + std::to_string(i + 1) + ": ";
        const Process& mover = st.side == Side::Left ? g.x : g.y;
        const auto succ = successors(mover, g.ctx.nabla_depth);
        if (st.transition >= succ.size()) throw WitnessMalformed(at + "no such transition");
        const Attack a{st.side, st.transition, succ[st.transition]};
        if (a.t.action != st.action || a.t.theta != st.theta)
            throw WitnessMalformed(at + "transition does not match the recorded action");
        if (game.discharged(g, a)) throw WitnessMalformed(at + "substitution breaks the distinction");
        const auto cands = game.candidates(g, a);
        if (cands.size() != st.candidates) throw WitnessMalformed(at + "wrong number of replies");
        if (i + 1 == w.steps.size()) {
            if (!cands.empty()) throw WitnessMalformed(at + "last move still has replies");
            return;
        }
        if (!st.response) throw WitnessMalformed(at + "missing reply");
        auto r = std::find_if(cands.begin(), cands.end(), [&](const Reply& c) { return c.index == *st.response; });
        if (r == cands.end()) throw WitnessMalformed(at + "reply is not a matching transition");
        std::optional<Name> name;
        if (st.action.kind == ActionKind::BoundOut) {
            if (!st.instantiation || *st.instantiation != game.output_name(g))
                throw WitnessMalformed(at + "bound output must open a new name");
            name = st.instantiation;
        } else if (st.action.kind == ActionKind::BoundIn) {
            const auto cases = game.input_cases(g);
            if (!st.instantiation || std::find(cases.begin(), cases.end(), *st.instantiation) == cases.end())
                throw WitnessMalformed(at + "input name is not one of the cases");
            name = st.instantiation;
        } else if (st.instantiation) {
            throw WitnessMalformed(at + "free move with a name");
        }
        g = game.sub(g, a, *r, name);
    }
}

std::optional<Formula> distinguishing_formula(const Witness& w) {
    replay(w);
    Goal root{w.left, w.right, w.context};
    auto f = extract(w.mode, root, {});
    if (!f) return std::nullopt;
    return f->first;
}

std::optional<Formula> distinguishing_formula(const BisimResult& r) {
    if (r.bisimilar || !r.witness) throw WitnessMalformed("bisimilar pairs have no distinguishing formula");
    if (r.witness->formula) return r.witness->formula;
    return distinguishing_formula(*r.witness);
}

bool formula_separates(const Witness& w) {
    if (!w.formula) return false;
    const Process& yes = w.formula_side == Side::Left ? w.left : w.right;
    const Process& no = w.formula_side == Side::Left ? w.right : w.left;
    if (is_ground_mode(w.mode)) {
        const std::uint32_t d = w.context.nabla_depth;
        return sat_ground(yes, *w.formula, std::nullopt, d) && !sat_ground(no, *w.formula, std::nullopt, d);
    }
    return sat_open(yes, *w.formula, w.context.nabla_depth, w.context.distinction) &&
           !sat_open(no, *w.formula, w.context.nabla_depth, w.context.distinction);
}

Prefix context_prefix(const GoalContext& ctx, const std::vector<Name>& names, const NameEnv& env) {
    std::vector<Name> eigens;
    for (const Name& n : names)
        if (n.is_eigen() && std::find(eigens.begin(), eigens.end(), n) == eigens.end()) eigens.push_back(n);
    std::sort(eigens.begin(), eigens.end(), [](const Name& a, const Name& b) {
        return a.ceiling != b.ceiling ? a.ceiling < b.ceiling : a.index < b.index;
    });
    std::vector<PrefixEntry> entries;
    auto it = eigens.begin();
    for (std::uint32_t level = 0;; ++level) {
        for (; it != eigens.end() && it->ceiling == level; ++it)
            entries.push_back({Quantifier::Forall, env.name_of(*it)});
        if (level == ctx.nabla_depth) break;
        entries.push_back({Quantifier::Nabla, env.name_of(Name::nabla(level + 1))});
    }
    return Prefix(std::move(entries));
}

}  // namespace pisym
