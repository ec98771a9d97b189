#include "doctest.h"

#include <set>

#include "stablerel/diagnostics.hpp"
#include "stablerel/parser.hpp"
#include "stablerel/program.hpp"
#include "support/generators.hpp"
#include "support/programs.hpp"

using namespace stablerel;

namespace {

Program load(const char* src, bool legacy = false) {
    Program p;
    Program::DefineOptions opts;
    opts.legacy_coarse = legacy;
    for (const auto& form : parse_program(src)) {
        REQUIRE(form.kind == TopForm::Kind::Define);
        p.define(form.def, opts);
    }
    return p;
}

std::set<std::string> registry_names(const Program& p) {
    std::set<std::string> out;
    for (const auto& k : p.registry()) out.insert(k.display());
    return out;
}

// Independent reference: does a Noto node occur anywhere in the tree?
bool contains_noto(const GoalPtr& g) {
    switch (g->kind()) {
    case GoalExpr::Kind::Noto: return true;
    case GoalExpr::Kind::Fresh:
        for (const auto& sub : g->body())
            if (contains_noto(sub)) return true;
        return false;
    case GoalExpr::Kind::Conde:
        for (const auto& br : g->branches())
            for (const auto& sub : br)
                if (contains_noto(sub)) return true;
        return false;
    default: return false;
    }
}

} // namespace

TEST_CASE("has_negation on the paper's bodies") {
    Program unsat = load(testprog::kUnsat);
    CHECK(unsat.find("p", 0)->negated);
    CHECK_FALSE(unsat.find("a", 0)->negated);
    CHECK_FALSE(unsat.find("b", 0)->negated);

    Program revo = load(testprog::kRevo);
    CHECK_FALSE(revo.find("revo", 2)->negated);
    CHECK_FALSE(revo.find("rev-acco", 3)->negated);

    // The reducible body nests the noto under conde and fresh.
    Program scc = load(testprog::kFinalScc);
    CHECK(scc.find("reducible", 1)->negated);
    CHECK(scc.find("fullyReduce", 2)->negated);
    CHECK_FALSE(scc.find("reachable", 2)->negated);
}

TEST_CASE("registry gating: fine-grained vs legacy-coarse") {
    CHECK(registry_names(load(testprog::kUnsat)) == std::set<std::string>{"p/0"});
    CHECK(registry_names(load(testprog::kRevo)).empty());
    CHECK(registry_names(load(testprog::kFinalScc)) ==
          std::set<std::string>{"reducible/1", "fullyReduce/2"});
    CHECK(registry_names(load(testprog::kGame)) == std::set<std::string>{"win/1"});

    // Legacy-coarse registers everything, reproducing the old behavior.
    CHECK(registry_names(load(testprog::kRevo, true)) ==
          std::set<std::string>{"revo/2", "rev-acco/3"});
}

TEST_CASE("duplicate definition is a diagnostic unless redefinition is allowed") {
    Program p = load(testprog::kUnsat);
    RelationDef dup;
    dup.name = "a";
    dup.arity = 0;
    dup.body = {GoalExpr::fail()};
    CHECK_THROWS_AS(p.define(dup, {}), Diagnostic);

    Program::DefineOptions repl;
    repl.allow_redefine = true;
    auto warning = p.define(dup, repl);
    REQUIRE(warning.has_value());
    CHECK(warning->find("a/0") != std::string::npos);

    // Same name, different arity is a different relation.
    RelationDef a1;
    a1.name = "a";
    a1.arity = 1;
    a1.params = {"x"};
    a1.body = {GoalExpr::succeed()};
    CHECK_NOTHROW(p.define(a1, {}));
}

TEST_CASE("builtins are installed, definite, and protected") {
    Program p;
    REQUIRE(p.find("nullo", 1) != nullptr);
    REQUIRE(p.find("conso", 3) != nullptr);
    CHECK(p.find("nullo", 1)->builtin);
    CHECK_FALSE(p.find("nullo", 1)->negated);
    CHECK(p.registry().empty());

    RelationDef clash;
    clash.name = "nullo";
    clash.arity = 1;
    clash.params = {"l"};
    clash.body = {GoalExpr::succeed()};
    CHECK_THROWS_AS(p.define(clash, {}), Diagnostic);
}

TEST_CASE("noto must wrap a call") {
    CHECK_THROWS_AS(GoalExpr::noto(GoalExpr::succeed()), Diagnostic);
    CHECK_THROWS_AS(parse_program("(defineo (p x) (noto (fresh (y) (q y))))"),
                    Diagnostic);
}

TEST_CASE("property: has_negation agrees with a tree scan and registry invariant holds") {
    gen::Rng rng(20240603);
    for (int i = 0; i < 300; ++i) {
        std::vector<GoalPtr> body = gen::random_body(rng, 3, true);
        bool reference = false;
        for (const auto& g : body) reference = reference || contains_noto(g);
        CHECK(has_negation(body) == reference);
    }

    // Random define sequences keep the registry exactly at the negated
    // subset (fine-grained) or at every relation (coarse).
    for (bool coarse : {false, true}) {
        Program p;
        Program::DefineOptions opts;
        opts.legacy_coarse = coarse;
        gen::Rng rng2(20240604);
        for (int i = 0; i < 40; ++i) {
            RelationDef def;
            def.name = "r" + std::to_string(i);
            def.arity = 1;
            def.params = {"x"};
            def.body = gen::random_body(rng2, 3, true);
            p.define(def, opts);
        }
        for (const auto& [key, def] : p.relations()) {
            if (def.builtin) continue;
            bool expected = coarse ? true : def.negated;
            CHECK(p.is_registered(key) == expected);
        }
    }
}

TEST_CASE("property: adding a conde branch never flips has_negation true->false") {
    gen::Rng rng(20240605);
    for (int i = 0; i < 200; ++i) {
        std::vector<std::vector<GoalPtr>> branches;
        int n = gen::pick(rng, 1, 3);
        for (int b = 0; b < n; ++b) branches.push_back(gen::random_body(rng, 2, true));
        GoalPtr before = GoalExpr::conde(branches);
        branches.push_back(gen::random_body(rng, 2, true));
        GoalPtr after = GoalExpr::conde(branches);
        if (has_negation(before)) CHECK(has_negation(after));
    }
}

TEST_CASE("defining a noto-free body never changes the registry") {
    Program p = load(testprog::kUnsat);
    auto before = registry_names(p);
    RelationDef def;
    def.name = "harmless";
    def.arity = 1;
    def.params = {"x"};
    def.body = {GoalExpr::unify(TermTpl::var("x"), TermTpl::sym("a"))};
    p.define(def, {});
    CHECK(registry_names(p) == before);
}
