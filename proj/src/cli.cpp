#include "pisym/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pisym/errors.hpp"
#include "pisym/lts.hpp"
#include "pisym/modal.hpp"
#include "pisym/syntax.hpp"

namespace pisym::cli {

using nlohmann::json;

std::string name_code(const Name& n) {
    switch (n.kind) {
    case NameKind::Nabla: return "n" + std::to_string(n.index);
    case NameKind::Eigen: return "e" + std::to_string(n.index) + "@" + std::to_string(n.ceiling);
    case NameKind::Bound: return "b" + std::to_string(n.index);
    case NameKind::Free: break;
    }
    throw InternalError("placeholder name in output");
}

Name parse_name_code(const std::string& s) {
    try {
        if (s.size() >= 2 && (s[0] == 'n' || s[0] == 'b')) {
            std::size_t used = 0;
            auto v = static_cast<std::uint32_t>(std::stoul(s.substr(1), &used));
            if (used + 1 == s.size()) return s[0] == 'n' ? Name::nabla(v) : Name::bound(v);
        }
        if (s.size() >= 4 && s[0] == 'e') {
            auto at = s.find('@');
            if (at != std::string::npos) {
                auto id = static_cast<std::uint32_t>(std::stoul(s.substr(1, at - 1)));
                auto c = static_cast<std::uint32_t>(std::stoul(s.substr(at + 1)));
                return Name::eigen(id, c);
            }
        }
    } catch (const std::logic_error&) {
    }
    throw WitnessMalformed("bad name code '" + s + "'");
}

namespace {

const char* kind_code(ActionKind k) {
    switch (k) {
    case ActionKind::Tau: return "tau";
    case ActionKind::FreeOut: return "out";
    case ActionKind::FreeIn: return "in";
    case ActionKind::BoundOut: return "bound-out";
    case ActionKind::BoundIn: return "bound-in";
    }
    return "?";
}

ActionKind parse_kind_code(const std::string& s) {
    for (auto k : {ActionKind::Tau, ActionKind::FreeOut, ActionKind::FreeIn, ActionKind::BoundOut, ActionKind::BoundIn})
        if (s == kind_code(k)) return k;
    throw WitnessMalformed("bad action kind '" + s + "'");
}

json action_code(const Action& a) {
    json j = json::array({kind_code(a.kind)});
    if (a.kind != ActionKind::Tau) j.push_back(name_code(a.channel));
    if (a.has_object()) j.push_back(name_code(a.object));
    return j;
}

Action parse_action_code(const json& j) {
    if (!j.is_array() || j.empty()) throw WitnessMalformed("bad action code");
    Action a;
    a.kind = parse_kind_code(j.at(0).get<std::string>());
    const std::size_t want = a.kind == ActionKind::Tau ? 1 : a.has_object() ? 3 : 2;
    if (j.size() != want) throw WitnessMalformed("bad action code arity");
    if (want > 1) a.channel = parse_name_code(j.at(1).get<std::string>());
    if (want > 2) a.object = parse_name_code(j.at(2).get<std::string>());
    return a;
}

json pairs_code(const std::vector<std::pair<Name, Name>>& ps) {
    json j = json::array();
    for (const auto& [a, b] : ps) j.push_back({name_code(a), name_code(b)});
    return j;
}

std::vector<std::pair<Name, Name>> parse_pairs_code(const json& j) {
    std::vector<std::pair<Name, Name>> out;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2) throw WitnessMalformed("bad pair code");
        out.emplace_back(parse_name_code(p[0].get<std::string>()), parse_name_code(p[1].get<std::string>()));
    }
    return out;
}

const char* side_name(Side s) { return s == Side::Left ? "left" : "right"; }

std::string distinction_text(const Distinction& d, const NameEnv& env) {
    std::string s;
    for (const auto& [a, b] : d.pairs()) {
        if (!s.empty()) s += ",";
        s += env.name_of(a) + "#" + env.name_of(b);
    }
    return s;
}

std::string action_text(const Action& a, const NameEnv& env) {
    return pretty(a, env, a.is_bound() ? fresh_ident("y", env) : std::string("y"));
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

bool mentions(const std::vector<std::string>& symbols, std::string_view s) {
    return std::find(symbols.begin(), symbols.end(), s) != symbols.end();
}

// Shared flags and the inputs they describe.
struct Common {
    std::string prefix;
    bool has_prefix = false;
    std::string distinct;
    std::string defs_file;
    bool json = false;

    Declarations defs;
    Prefix pf;
    NameEnv env;
    Distinction d;

    void add_to(CLI::App* app) {
        app->add_option("--prefix", prefix, "quantifier prefix, e.g. \"forall x, nabla y\"");
        app->add_option("--defs", defs_file, "file of process declarations");
        app->add_flag("--json", json, "machine-readable output");
    }

    void add_distinct(CLI::App* app) {
        app->add_option("--distinct", distinct, "extra distinct pairs \"a#b,c#d\"");
    }

    // Parses all inputs and settles the prefix. Without --prefix every
    // free name becomes a nabla constant, in order of appearance.
    void load(const std::vector<std::vector<std::string>>& symbols, bool ground) {
        bool reserved = false;
        std::vector<std::string> seen;
        for (const auto& syms : symbols)
            for (const auto& s : syms) {
                if (s == kReservedName) reserved = true;
                else if (!mentions(seen, s)) seen.push_back(s);
            }
        pf = has_prefix ? Prefix::parse(prefix) : Prefix::all_nabla(seen);
        if (reserved) pf = pf.with_reserved();
        if (ground) {
            std::vector<std::string> names;
            for (const auto& e : pf.entries()) names.push_back(e.name);
            pf = Prefix::all_nabla(names);
        }
        env = NameEnv(pf);
        d = {};
        std::stringstream ss(distinct);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto trim = [](std::string s) {
                s.erase(0, s.find_first_not_of(" \t"));
                s.erase(s.find_last_not_of(" \t") + 1);
                return s;
            };
            item = trim(item);
            if (item.empty()) continue;
            auto hash = item.find('#');
            if (hash == std::string::npos) throw UsageError("distinct pair '" + item + "' needs the form a#b");
            Name a = env.lookup(trim(item.substr(0, hash)));
            Name b = env.lookup(trim(item.substr(hash + 1)));
            if (a == b) throw UsageError("distinct pair '" + item + "' names one name twice");
            d.add(a, b);
        }
    }

    ParsedProcess parse(const std::string& text) const { return parse_process(text, defs); }
};

json envelope(const std::string& command, bool verdict) {
    return json{{"command", command},
                {"verdict", verdict},
                {"witness", nullptr},
                {"certificate", nullptr},
                {"stats", {{"goals", 0}, {"branches", 0}, {"time_ms", 0}}}};
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

json witness_json(const Witness& w, const Prefix& prefix) {
    NameEnv env(prefix);
    json steps = json::array();
    for (const auto& st : w.steps) {
        json code = {{"action", action_code(st.action)},
                     {"theta", pairs_code(st.theta.bindings())},
                     {"instantiation", st.instantiation ? json(name_code(*st.instantiation)) : json(nullptr)}};
        steps.push_back({{"side", side_name(st.side)},
                         {"transition", st.transition},
                         {"action", action_text(st.action, env)},
                         {"theta", pretty(st.theta, env)},
                         {"candidates", st.candidates},
                         {"response", st.response ? json(*st.response) : json(nullptr)},
                         {"instantiation", st.instantiation ? json(env.name_of(*st.instantiation)) : json(nullptr)},
                         {"code", code}});
    }
    std::vector<std::pair<Name, Name>> dpairs(w.context.distinction.pairs().begin(), w.context.distinction.pairs().end());
    return {{"mode", to_string(w.mode)},
            {"prefix", prefix.str()},
            {"left", pretty(w.left, NameEnv(prefix))},
            {"right", pretty(w.right, NameEnv(prefix))},
            {"context",
             {{"nabla_depth", w.context.nabla_depth},
              {"next_eigen", w.context.next_eigen},
              {"distinction", pairs_code(dpairs)}}},
            {"steps", steps},
            {"formula", w.formula ? json(pretty(*w.formula, NameEnv(prefix))) : json(nullptr)},
            {"formula_side", side_name(w.formula_side)}};
}

Witness witness_from_json(const json& j) {
    try {
        Witness w;
        w.mode = parse_mode(j.at("mode").get<std::string>());
        Prefix pf = Prefix::parse(j.at("prefix").get<std::string>());
        w.left = encode(parse_process(j.at("left").get<std::string>()), pf);
        w.right = encode(parse_process(j.at("right").get<std::string>()), pf);
        const json& c = j.at("context");
        w.context.nabla_depth = c.at("nabla_depth").get<std::uint32_t>();
        w.context.next_eigen = c.at("next_eigen").get<std::uint32_t>();
        for (const auto& [a, b] : parse_pairs_code(c.at("distinction"))) w.context.distinction.add(a, b);
        for (const json& s : j.at("steps")) {
            WitnessStep st;
            const auto side = s.at("side").get<std::string>();
            if (side != "left" && side != "right") throw WitnessMalformed("bad side '" + side + "'");
            st.side = side == "left" ? Side::Left : Side::Right;
            st.transition = s.at("transition").get<std::size_t>();
            st.candidates = s.at("candidates").get<std::size_t>();
            if (!s.at("response").is_null()) st.response = s.at("response").get<std::size_t>();
            const json& code = s.at("code");
            st.action = parse_action_code(code.at("action"));
            for (const auto& [v, val] : parse_pairs_code(code.at("theta"))) st.theta.bind(v, val);
            if (!code.at("instantiation").is_null())
                st.instantiation = parse_name_code(code.at("instantiation").get<std::string>());
            w.steps.push_back(st);
        }
        if (!j.at("formula").is_null()) {
            w.formula = encode(parse_formula(j.at("formula").get<std::string>()), pf);
            w.formula_side = j.at("formula_side").get<std::string>() == "left" ? Side::Left : Side::Right;
        }
        return w;
    } catch (const json::exception& e) {
        throw WitnessMalformed(std::string("bad witness json: ") + e.what());
    }
}

namespace {

int cmd_parse(Common& c, const std::string& expr, std::ostream& out) {
    ParsedProcess pp = c.parse(expr);
    c.load({pp.symbols}, false);
    Process p = encode(pp, c.pf);
    const std::string text = pretty(p, c.env);
    if (c.json) {
        json j = envelope("parse", true);
        j["prefix"] = c.pf.str();
        j["process"] = text;
        out << j.dump(2) << "\n";
    } else {
        out << text << "\n";
    }
    return 0;
}

int cmd_steps(Common& c, const std::string& expr, bool bound_only, bool free_only, std::ostream& out) {
    ParsedProcess pp = c.parse(expr);
    c.load({pp.symbols}, false);
    Process p = encode(pp, c.pf);
    const std::uint32_t depth = std::max(c.pf.nabla_count(), depth_of(p));
    json rows = json::array();
    std::vector<std::string> lines;
    for (const auto& t : successors(p, depth)) {
        if (bound_only && !t.action.is_bound()) continue;
        if (free_only && t.action.is_bound()) continue;
        std::string act, cont;
        if (t.action.is_bound()) {
            const std::string y = fresh_ident("y", c.env);
            NameEnv inner = c.env;
            inner.bind(y, Name::nabla(depth + 1));
            act = pretty(t.action, c.env, y);
            cont = pretty(instantiate(t.cont, Name::nabla(depth + 1)), inner);
        } else {
            act = pretty(t.action, c.env);
            cont = pretty(t.cont, c.env);
        }
        const std::string th = pretty(t.theta, c.env);
        lines.push_back(th + " ; " + act + " ; " + cont);
        rows.push_back({{"theta", th}, {"action", act}, {"continuation", cont}});
    }
    const bool any = !lines.empty();
    if (c.json) {
        json j = envelope("steps", any);
        j["prefix"] = c.pf.str();
        j["transitions"] = rows;
        out << j.dump(2) << "\n";
    } else {
        for (const auto& l : lines) out << l << "\n";
    }
    return any ? 0 : 1;
}

int cmd_lts(Common& c, const std::string& expr, std::size_t max_states, const std::string& dot, std::ostream& out) {
    ParsedProcess pp = c.parse(expr);
    c.load({pp.symbols}, false);
    Process p = encode(pp, c.pf);
    LtsGraph g = lts_graph(p, max_states);
    if (!dot.empty()) {
        std::ofstream f(dot);
        if (!f) throw UsageError("cannot write '" + dot + "'");
        f << to_dot(g, c.env);
    }
    json states = json::array(), edges = json::array();
    for (const auto& s : g.states) states.push_back(pretty(s, c.env));
    for (const auto& e : g.edges) {
        const std::string act = e.action.is_bound() ? pretty(e.action, c.env, c.env.name_of(e.bound_name))
                                                    : pretty(e.action, c.env);
        edges.push_back({{"from", e.from}, {"to", e.to}, {"action", act}, {"theta", pretty(e.theta, c.env)}});
    }
    if (c.json) {
        json j = envelope("lts", true);
        j["prefix"] = c.pf.str();
        j["states"] = states;
        j["edges"] = edges;
        out << j.dump(2) << "\n";
    } else {
        out << g.states.size() << " states, " << g.edges.size() << " edges\n";
        for (std::size_t i = 0; i < g.states.size(); ++i) out << "s" << i << " = " << states[i].get<std::string>() << "\n";
        for (const auto& e : edges)
            out << "s" << e["from"].get<std::size_t>() << " -> s" << e["to"].get<std::size_t>() << " : "
                << e["action"].get<std::string>() << " ; " << e["theta"].get<std::string>() << "\n";
    }
    return 0;
}

json certificate_json(const std::vector<CertificateEntry>& cert, const Prefix& prefix) {
    NameEnv env(prefix);
    json out = json::array();
    for (const auto& e : cert) {
        std::vector<Name> names = free_names(e.left);
        for (const Name& n : free_names(e.right)) names.push_back(n);
        for (const auto& [a, b] : e.context.distinction.pairs()) {
            names.push_back(a);
            names.push_back(b);
        }
        out.push_back({{"prefix", context_prefix(e.context, names, env).str()},
                       {"distinction", distinction_text(e.context.distinction, env)},
                       {"left", pretty(e.left, env)},
                       {"right", pretty(e.right, env)}});
    }
    return out;
}

int cmd_bisim(Common& c, const std::string& mode_text, std::optional<std::size_t> max_depth, const std::string& l,
              const std::string& r, std::ostream& out) {
    const BisimMode mode = parse_mode(mode_text);
    const bool ground = mode == BisimMode::Late || mode == BisimMode::Early;
    ParsedProcess pl = c.parse(l), pr = c.parse(r);
    c.load({pl.symbols, pr.symbols}, ground);
    Process left = encode(pl, c.pf), right = encode(pr, c.pf);
    BisimOptions opts;
    opts.max_depth = max_depth;
    opts.certificate = c.json;
    const auto t0 = std::chrono::steady_clock::now();
    BisimResult res = bisim(mode, left, right, GoalContext::from_prefix(c.pf, ground ? Distinction{} : c.d), opts);
    const double ms = elapsed_ms(t0);

    if (c.json) {
        json j = envelope("bisim", res.bisimilar);
        j["mode"] = to_string(mode);
        j["prefix"] = c.pf.str();
        if (res.witness) j["witness"] = witness_json(*res.witness, c.pf);
        if (res.bisimilar) j["certificate"] = certificate_json(res.certificate, c.pf);
        j["stats"] = {{"goals", res.stats.goals}, {"branches", res.stats.branches}, {"time_ms", ms}};
        out << j.dump(2) << "\n";
        return res.bisimilar ? 0 : 1;
    }
    if (res.bisimilar) {
        out << "bisimilar (" << to_string(mode) << ")\n";
        return 0;
    }
    out << "not bisimilar (" << to_string(mode) << ")\n";
    const Witness& w = *res.witness;
    NameEnv env = c.env;
    for (std::size_t i = 0; i < w.steps.size(); ++i) {
        const auto& st = w.steps[i];
        out << "  " << i + 1 << ". " << side_name(st.side) << " moves " << action_text(st.action, env);
        if (!st.theta.is_identity()) out << " under " << pretty(st.theta, env);
        out << " (transition " << st.transition << ")";
        if (st.candidates == 0) {
            out << "; no matching reply\n";
            continue;
        }
        out << "; " << st.candidates << " matching repl" << (st.candidates == 1 ? "y" : "ies") << ", following "
            << *st.response;
        if (st.instantiation) out << " with the bound name as " << env.name_of(*st.instantiation);
        out << "\n";
    }
    if (w.formula)
        out << "formula (" << side_name(w.formula_side) << " satisfies): " << pretty(*w.formula, c.env) << "\n";
    return 1;
}

int cmd_check(Common& c, const std::string& mode, std::optional<std::uint32_t> fresh, const std::string& proc,
              const std::string& formula, std::ostream& out) {
    if (mode != "ground" && mode != "open") throw UsageError("check mode must be ground or open, not '" + mode + "'");
    const bool ground = mode == "ground";
    ParsedProcess pp = c.parse(proc);
    ParsedFormula pf = parse_formula(formula);
    c.load({pp.symbols, pf.symbols}, ground);
    Process p = encode(pp, c.pf);
    Formula f = encode(pf, c.pf);
    const auto t0 = std::chrono::steady_clock::now();
    const bool ok = ground ? sat_ground(p, f, fresh, c.pf.nabla_count()) : sat_open(p, f, c.pf, c.d);
    const double ms = elapsed_ms(t0);
    if (c.json) {
        json j = envelope("check", ok);
        j["mode"] = mode;
        j["prefix"] = c.pf.str();
        j["fresh"] = fresh ? *fresh : fresh_budget(f);
        j["stats"]["time_ms"] = ms;
        out << j.dump(2) << "\n";
    } else {
        out << (ok ? "satisfied" : "not satisfied") << "\n";
    }
    return ok ? 0 : 1;
}

std::string read_arg(const std::string& a, std::istream& in) {
    if (a != "-") return a;
    std::stringstream ss;
    ss << in.rdbuf();
    std::string s = ss.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"symbolic pi-calculus bisimulation and modal checker", "pisym"};
    app.require_subcommand(1, 1);
    Common c;
    std::string expr, left, right, formula, dot, bisim_mode, check_mode;
    std::size_t max_states = 10000;
    std::optional<std::size_t> max_depth;
    std::optional<std::uint32_t> fresh;
    bool bound_only = false, free_only = false;

    auto* parse = app.add_subcommand("parse", "parse and print a process");
    c.add_to(parse);
    parse->add_option("process", expr)->required();

    auto* steps = app.add_subcommand("steps", "list one-step transitions");
    c.add_to(steps);
    auto* b = steps->add_flag("--bound", bound_only, "bound actions only");
    auto* f = steps->add_flag("--free", free_only, "free actions only");
    b->excludes(f);
    steps->add_option("process", expr)->required();

    auto* lts = app.add_subcommand("lts", "reachable transition graph");
    c.add_to(lts);
    lts->add_option("--max-states", max_states, "state budget")->check(CLI::PositiveNumber);
    lts->add_option("--dot", dot, "write graphviz output to FILE");
    lts->add_option("process", expr)->required();

    auto* bis = app.add_subcommand("bisim", "decide bisimilarity");
    c.add_to(bis);
    c.add_distinct(bis);
    bis->add_option("--mode", bisim_mode, "open | open-early | late | early")->default_val("open");
    bis->add_option("--max-depth", max_depth, "nesting budget");
    bis->add_option("left", left)->required();
    bis->add_option("right", right)->required();

    auto* chk = app.add_subcommand("check", "modal satisfaction");
    c.add_to(chk);
    c.add_distinct(chk);
    chk->add_option("--mode", check_mode, "ground | open")->default_val("ground");
    chk->add_option("--fresh", fresh, "extra fresh names (default: bound input count)");
    chk->add_option("process", expr)->required();
    chk->add_option("formula", formula)->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: UsageError: " << e.what() << "\n";
        return 2;
    }

    try {
        for (auto* sub : {parse, steps, lts, bis, chk})
            if (sub->parsed()) c.has_prefix = sub->count("--prefix") > 0;
        if (!c.defs_file.empty()) c.defs = Declarations::parse(read_file(c.defs_file));
        if (parse->parsed()) return cmd_parse(c, read_arg(expr, in), out);
        if (steps->parsed()) return cmd_steps(c, read_arg(expr, in), bound_only, free_only, out);
        if (lts->parsed()) return cmd_lts(c, read_arg(expr, in), max_states, dot, out);
        if (bis->parsed()) return cmd_bisim(c, bisim_mode, max_depth, left, right, out);
        return cmd_check(c, check_mode, fresh, read_arg(expr, in), formula, out);
    } catch (const Error& e) {
        err << "error: " << e.code() << ": " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: InternalError: " << e.what() << "\n";
    }
    return 2;
}

}  // namespace pisym::cli
