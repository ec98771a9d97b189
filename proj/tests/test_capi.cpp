// Exercises the shared-library surface exactly as an external client would:
// through stablerel.h only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "stablerel.h"
#include "support/programs.hpp"

namespace {

struct Handle {
    stablerel_session* s = nullptr;
    Handle() : s(stablerel_session_new()) {}
    ~Handle() { stablerel_session_free(s); }
};

std::string take(char* p) {
    std::string out = p == nullptr ? "" : p;
    stablerel_string_free(p);
    return out;
}

} // namespace

TEST_CASE("session lifecycle and version") {
    Handle h;
    REQUIRE(h.s != nullptr);
    CHECK(std::string(stablerel_version()) == "0.1.0");
    CHECK(std::string(stablerel_last_error(h.s)).empty());
    stablerel_session_free(nullptr); // tolerated
}

TEST_CASE("exec produces the expected transcript lines") {
    Handle h;
    char* out = nullptr;
    std::string src = std::string(testprog::kUnsat) +
                      "(run 1 (q) (a))\n(run-partial 1 (q) (a))\n(run-partial 1 (q) (p))\n";
    REQUIRE(stablerel_exec(h.s, src.c_str(), &out) == STABLEREL_OK);
    CHECK(take(out) == "()\n(_.0)\n()\n");
}

TEST_CASE("status codes: parse vs diagnostic vs invalid") {
    Handle h;
    CHECK(stablerel_exec(h.s, "(run 1 (q) (a", nullptr) == STABLEREL_ERR_PARSE);
    CHECK(std::string(stablerel_last_error(h.s)).find("unbalanced") != std::string::npos);

    CHECK(stablerel_exec(h.s, "(run 1 (q) (missing q))", nullptr) ==
          STABLEREL_ERR_DIAGNOSTIC);
    CHECK(std::string(stablerel_last_error(h.s)).find("missing/1") != std::string::npos);

    CHECK(stablerel_set_option(h.s, "no-such-option", 1) == STABLEREL_ERR_INVALID);
    CHECK(stablerel_set_option(h.s, "cap", 0) == STABLEREL_ERR_INVALID);
    CHECK(stablerel_set_mode(h.s, "sideways") == STABLEREL_ERR_INVALID);
    CHECK(stablerel_exec(nullptr, "(run 1 (q) (a))", nullptr) == STABLEREL_ERR_INVALID);
    CHECK(stablerel_query(h.s, "(defineo (x) succeed)", nullptr, nullptr, nullptr,
                          nullptr) == STABLEREL_ERR_PARSE);
}

TEST_CASE("query with mode override, count, and exhausted flag") {
    Handle h;
    REQUIRE(stablerel_exec(h.s, testprog::kUnsat, nullptr) == STABLEREL_OK);
    REQUIRE(stablerel_exec(h.s, testprog::kRevo, nullptr) == STABLEREL_OK);

    char* answers = nullptr;
    int count = -1, exhausted = -1;
    REQUIRE(stablerel_query(h.s, "(run 1 (q) (revo '(a b c) q))", nullptr, &answers,
                            &count, &exhausted) == STABLEREL_OK);
    CHECK(take(answers) == "()"); // global check blocks the answer
    CHECK(count == 0);
    CHECK(exhausted == 1);

    REQUIRE(stablerel_query(h.s, "(run 1 (q) (revo '(a b c) q))", "run-partial",
                            &answers, &count, &exhausted) == STABLEREL_OK);
    CHECK(take(answers) == "((c b a))");
    CHECK(count == 1);
    CHECK(exhausted == 0);

    // Session-wide override through set_mode.
    REQUIRE(stablerel_set_mode(h.s, "run-partial") == STABLEREL_OK);
    char* out = nullptr;
    REQUIRE(stablerel_exec(h.s, "(run 1 (q) (revo '() '()))", &out) == STABLEREL_OK);
    CHECK(take(out) == "(_.0)\n");
}

TEST_CASE("classify, graph, and ground dump surfaces") {
    Handle h;
    REQUIRE(stablerel_exec(h.s, testprog::kFinalScc, nullptr) == STABLEREL_OK);

    char* report = nullptr;
    REQUIRE(stablerel_classify(h.s, &report) == STABLEREL_OK);
    std::string text = take(report);
    CHECK(text.find("program: Stratified; registry: reducible/1 fullyReduce/2") == 0);

    char* dot = nullptr;
    REQUIRE(stablerel_graph_dot(h.s, &dot) == STABLEREL_OK);
    std::string dot_text = take(dot);
    CHECK(dot_text.find("digraph") != std::string::npos);
    CHECK(dot_text.find("style=dashed") != std::string::npos);

    char* dump = nullptr;
    REQUIRE(stablerel_ground_dump(h.s, nullptr, &dump) == STABLEREL_OK);
    std::string dump_text = take(dump);
    CHECK(dump_text.find("edge(a,b).") != std::string::npos);
    CHECK(dump_text.find("not reducible(") != std::string::npos);

    // Scoped to a query form.
    REQUIRE(stablerel_ground_dump(h.s, "(run 1 (q) (reachable 'a q))", &dump) ==
            STABLEREL_OK);
    std::string scoped = take(dump);
    CHECK(scoped.find("reachable(a,b)") != std::string::npos);
}

TEST_CASE("options steer the engine: legacy-coarse and steps") {
    Handle h;
    REQUIRE(stablerel_set_option(h.s, "legacy-coarse", 1) == STABLEREL_OK);
    REQUIRE(stablerel_exec(h.s, testprog::kRevo, nullptr) == STABLEREL_OK);
    CHECK(stablerel_query(h.s, "(run 1 (q) (revo '() '()))", nullptr, nullptr, nullptr,
                          nullptr) == STABLEREL_ERR_DIAGNOSTIC);
    CHECK(std::string(stablerel_last_error(h.s)).find("rev-acco/3") != std::string::npos);

    Handle h2;
    REQUIRE(stablerel_set_option(h2.s, "steps", 50000) == STABLEREL_OK);
    REQUIRE(stablerel_exec(h2.s, testprog::kRevo, nullptr) == STABLEREL_OK);
    CHECK(stablerel_query(h2.s, "(run 2 (q) (revo q '(a)))", nullptr, nullptr, nullptr,
                          nullptr) == STABLEREL_ERR_DIAGNOSTIC);
    REQUIRE(stablerel_set_option(h2.s, "steps", -1) == STABLEREL_OK); // unlimited
    int count = 0;
    CHECK(stablerel_query(h2.s, "(run 1 (q) (revo q '(a)))", nullptr, nullptr, &count,
                          nullptr) == STABLEREL_OK);
    CHECK(count == 1);
}

TEST_CASE("warnings surface through take_warnings under repl mode") {
    Handle h;
    REQUIRE(stablerel_set_option(h.s, "repl", 1) == STABLEREL_OK);
    REQUIRE(stablerel_exec(h.s, "(defineo (a) succeed)", nullptr) == STABLEREL_OK);
    REQUIRE(stablerel_exec(h.s, "(defineo (a) fail)", nullptr) == STABLEREL_OK);
    char* w = nullptr;
    REQUIRE(stablerel_take_warnings(h.s, &w) == STABLEREL_OK);
    CHECK(take(w).find("redefining a/0") != std::string::npos);
    REQUIRE(stablerel_take_warnings(h.s, &w) == STABLEREL_OK);
    CHECK(take(w).empty());

    // Without repl mode, redefinition is an error.
    Handle strict;
    REQUIRE(stablerel_exec(strict.s, "(defineo (a) succeed)", nullptr) == STABLEREL_OK);
    CHECK(stablerel_exec(strict.s, "(defineo (a) fail)", nullptr) ==
          STABLEREL_ERR_DIAGNOSTIC);
}
