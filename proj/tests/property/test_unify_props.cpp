#include <doctest.h>

#include <functional>

#include "common.hpp"
#include "pisym/unify.hpp"

using namespace pisym;

namespace {

// Small pool: two nabla levels and eigenvariables of ceilings 0..2.
const std::vector<Name> kPool = {Name::nabla(1),     Name::nabla(2),     Name::eigen(1, 0),
                                 Name::eigen(2, 0), Name::eigen(3, 1), Name::eigen(4, 2)};

// Every level-sound grounding of the pool's eigenvariables: each goes
// to a visible nabla, or to one of a few new constants.
void groundings(std::size_t i, std::map<std::uint32_t, Name>& cur,
                const std::function<void(const std::map<std::uint32_t, Name>&)>& f) {
    if (i == kPool.size()) {
        f(cur);
        return;
    }
    const Name& n = kPool[i];
    if (!n.is_eigen()) {
        groundings(i + 1, cur, f);
        return;
    }
    for (std::uint32_t l = 1; l <= std::min<std::uint32_t>(n.ceiling, 2); ++l) {
        cur[n.index] = Name::nabla(l);
        groundings(i + 1, cur, f);
    }
    for (std::uint32_t c = 0; c < 4; ++c) {
        cur[n.index] = Name::nabla(10 + c);
        groundings(i + 1, cur, f);
    }
    cur.erase(n.index);
}

Name ground(const std::map<std::uint32_t, Name>& g, const Name& n) {
    if (!n.is_eigen()) return n;
    return g.at(n.index);
}

}  // namespace

TEST_CASE("unifiers are sound, most general, and failures are real") {
    for (const Name& a : kPool)
        for (const Name& b : kPool) {
            const auto theta = unify_names(a, b);
            if (theta) CHECK(apply(*theta, a) == apply(*theta, b));
            std::map<std::uint32_t, Name> cur;
            groundings(0, cur, [&](const std::map<std::uint32_t, Name>& g) {
                if (ground(g, a) != ground(g, b)) return;
                // a grounding that equates a and b factors through theta
                REQUIRE(theta);
                for (const Name& n : kPool) CHECK(ground(g, apply(*theta, n)) == ground(g, n));
            });
        }
}

TEST_CASE("unifiers are level sound") {
    for (const Name& a : kPool)
        for (const Name& b : kPool)
            if (auto theta = unify_names(a, b))
                for (const auto& [v, val] : theta->bindings()) {
                    if (val.is_nabla()) CHECK(val.index <= v.ceiling);
                    if (val.is_eigen()) CHECK(val.ceiling <= v.ceiling);
                }
}

TEST_CASE("composition applies inner first") {
    std::vector<Substitution> subs{Substitution{}};
    for (const Name& a : kPool)
        for (const Name& b : kPool)
            if (auto t = unify_names(a, b)) subs.push_back(*t);
    for (const auto& outer : subs)
        for (const auto& inner : subs) {
            const Substitution c = compose(outer, inner);
            // inner then outer, chased to a fixed point
            bool chained = false;
            for (const auto& b : outer.bindings()) chained = chained || (b.second.is_eigen() && inner.binds(b.second.index));
            for (const Name& n : kPool) {
                CHECK(c(n) == c(outer(inner(n))));
                if (!chained) CHECK(c(n) == outer(inner(n)));
            }
            // idempotent
            for (const Name& n : kPool) CHECK(c(c(n)) == c(n));
        }
}

TEST_CASE("respects agrees with checking every pair") {
    std::vector<Substitution> subs{Substitution{}};
    for (const Name& a : kPool)
        for (const Name& b : kPool)
            if (auto t = unify_names(a, b)) subs.push_back(*t);
    for (std::size_t i = 0; i < kPool.size(); ++i)
        for (std::size_t j = i + 1; j < kPool.size(); ++j) {
            Distinction d;
            d.add(kPool[i], kPool[j]);
            d.add(kPool[0], kPool[kPool.size() - 1 - i]);
            for (const auto& s : subs) {
                bool all = true;
                for (const auto& [x, y] : d.pairs()) all = all && s(x) != s(y);
                CHECK(respects(s, d) == all);
            }
        }
}
