#include "doctest.h"

#include <algorithm>
#include <set>

#include "stablerel/diagnostics.hpp"
#include "stablerel/grounder.hpp"
#include "stablerel/parser.hpp"
#include "stablerel/stable_models.hpp"
#include "support/oracles.hpp"
#include "support/programs.hpp"

using namespace stablerel;

namespace {

Program load(const char* src) {
    Program p;
    for (const auto& form : parse_program(src)) p.define(form.def, {});
    return p;
}

std::set<PredKey> all_relations(const Program& p) {
    std::set<PredKey> out;
    for (const auto& [key, def] : p.relations())
        if (!def.builtin) out.insert(key);
    return out;
}

std::set<std::string> true_atom_keys(const GroundProgram& pi, const Interpretation& m) {
    std::set<std::string> out;
    for (int i : m.members()) out.insert(pi.atoms[i].key());
    return out;
}

std::set<std::set<std::string>> model_key_sets(const GroundProgram& pi,
                                               const StableModelSet& ms) {
    std::set<std::set<std::string>> out;
    for (const auto& m : ms.models) out.insert(true_atom_keys(pi, m));
    return out;
}

} // namespace

TEST_CASE("grounding the unsatisfiable listing gives the three-atom image") {
    Program p = load(testprog::kUnsat);
    GroundProgram pi = ground(p, all_relations(p));
    CHECK(pi.atom_count() == 3);
    CHECK(pi.rules.size() == 3);
    CHECK(pi.dump() == "a.\nb.\np :- a, not p.\n");
}

TEST_CASE("guided grounding of the game resolves the move subgoal first") {
    Program p = load(testprog::kGame);
    GroundProgram pi = ground(p, all_relations(p));

    // 4 move facts, win(a..d) mentioned, and exactly the 4 supported win rules.
    CHECK(pi.atom_count() == 8);
    int win_rules = 0, move_facts = 0;
    for (const auto& r : pi.rules) {
        const GroundAtom& head = pi.atoms[r.head];
        if (head.pred.name == "move") {
            ++move_facts;
            CHECK(r.pos.empty());
            CHECK(r.neg.empty());
        } else {
            ++win_rules;
            CHECK(r.pos.size() == 1);
            CHECK(r.neg.size() == 1);
        }
    }
    CHECK(move_facts == 4);
    CHECK(win_rules == 4);

    std::string dump = pi.dump();
    CHECK(dump.find("win(a) :- move(a,b), not win(b).") != std::string::npos);
    CHECK(dump.find("win(b) :- move(b,c), not win(c).") != std::string::npos);
    CHECK(dump.find("win(b) :- move(b,a), not win(a).") != std::string::npos);
    CHECK(dump.find("win(c) :- move(c,d), not win(d).") != std::string::npos);
}

TEST_CASE("full instantiation produces the 16 pre-pruning win rules, same models") {
    Program p = load(testprog::kGame);
    GroundProgram guided = ground(p, all_relations(p), {}, GroundMode::Guided);
    GroundProgram full = ground(p, all_relations(p), {}, GroundMode::Full);

    int full_win_rules = 0;
    for (const auto& r : full.rules)
        if (full.atoms[r.head].pred.name == "win") ++full_win_rules;
    CHECK(full_win_rules == 16);

    SolveOptions opts;
    auto m_guided = model_key_sets(guided, enumerate_stable_models(guided, opts).models);
    auto m_full = model_key_sets(full, enumerate_stable_models(full, opts).models);
    CHECK(m_guided == m_full);
}

TEST_CASE("full vs guided agree on the stratified program too") {
    Program p = load(testprog::kFinalScc);
    ClassifyResult cls = classify(p);
    REQUIRE(cls.classification == Classification::Stratified);

    auto unique_model = [&](GroundMode mode) {
        GroundProgram pi = ground(p, all_relations(p), {}, mode);
        std::vector<int> strata(pi.atom_count());
        for (std::size_t i = 0; i < pi.atoms.size(); ++i)
            strata[i] = cls.strata.at(pi.atoms[i].pred);
        SolveOptions opts;
        opts.atom_strata = &strata;
        auto solved = enumerate_stable_models(pi, opts);
        REQUIRE(solved.models.models.size() == 1);
        return true_atom_keys(pi, solved.models.models[0]);
    };
    CHECK(unique_model(GroundMode::Guided) == unique_model(GroundMode::Full));
}

TEST_CASE("herbrand constants per cone") {
    Program game = load(testprog::kGame);
    auto consts = herbrand_constants(game, all_relations(game));
    REQUIRE(consts.size() == 4);
    CHECK(term_to_string(consts[0]) == "a");
    CHECK(term_to_string(consts[3]) == "d");

    Program unsat = load(testprog::kUnsat);
    CHECK(herbrand_constants(unsat, all_relations(unsat)).empty());

    Program scc = load(testprog::kFinalScc);
    auto scc_consts = herbrand_constants(scc, all_relations(scc));
    CHECK(scc_consts.size() == 10); // a..i and k; no j
    for (const auto& c : scc_consts) CHECK(c->is_sym());
}

TEST_CASE("grounding an empty cone is empty") {
    Program p = load(testprog::kGame);
    GroundProgram pi = ground(p, {});
    CHECK(pi.empty());
    CHECK(pi.dump().empty());
}

TEST_CASE("list-building relations are flagged as non-groundable") {
    Program p = load(testprog::kRevo);
    auto offender = first_non_groundable(p, all_relations(p));
    REQUIRE(offender.has_value());
    CHECK(offender->display() == "rev-acco/3");

    Program game = load(testprog::kGame);
    CHECK_FALSE(first_non_groundable(game, all_relations(game)).has_value());
}

TEST_CASE("quoted pair constants in a groundable cone are rejected") {
    Program p = load("(defineo (p x) (== x '(a b)))");
    auto offender = first_non_groundable(p, all_relations(p));
    REQUIRE(offender.has_value());
    CHECK(offender->display() == "p/1");
}

TEST_CASE("every ground rule traces to one source clause") {
    Program p = load(testprog::kFinalScc);
    GroundProgram pi = ground(p, all_relations(p));

    // Collect (def_index, ordinal) -> head predicate from the flattening.
    std::map<std::pair<int, int>, PredKey> clause_heads;
    for (const auto& [key, def] : p.relations()) {
        if (def.builtin) continue;
        for (const auto& c : flatten_relation(p, def))
            clause_heads[{c.def_index, c.clause_ordinal}] = c.head;
    }
    for (const auto& r : pi.rules) {
        auto it = clause_heads.find({r.def_index, r.clause_ordinal});
        REQUIRE(it != clause_heads.end());
        CHECK(it->second == pi.atoms[r.head].pred);
    }
}

TEST_CASE("grounded positive fragment matches the reachability oracle") {
    Program p = load(testprog::kFinalScc);
    GroundProgram pi = ground(p, {PredKey{"edge", 2}, PredKey{"reachable", 2}});
    Interpretation m = minimal_model(pi);

    std::set<std::pair<std::string, std::string>> derived;
    for (int i : m.members()) {
        const GroundAtom& a = pi.atoms[i];
        if (a.pred.name == "reachable")
            derived.emplace(term_to_string(a.args[0]), term_to_string(a.args[1]));
    }
    auto closure = oracle::reach_closure(oracle::final_scc_edges());
    std::set<std::pair<std::string, std::string>> expected;
    for (const auto& [x, ys] : closure)
        for (const auto& y : ys) expected.emplace(x, y);
    CHECK(derived == expected);
    CHECK(derived.size() == 35);
    // Nine nodes are reachable from a.
    CHECK(closure.at("a").size() == 9);
}

TEST_CASE("rules that contain fail never make it into the image") {
    Program p = load("(defineo (p x) (conde [(== x 'a)] [(== x 'b) fail]))");
    GroundProgram pi = ground(p, all_relations(p));
    REQUIRE(pi.rules.size() == 1);
    CHECK(pi.atoms[pi.rules[0].head].key() == "p(a)");
}
