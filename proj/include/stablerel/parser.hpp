#ifndef STABLEREL_PARSER_HPP
#define STABLEREL_PARSER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stablerel/engine.hpp"
#include "stablerel/program.hpp"

namespace stablerel {

// Surface syntax tree. Brackets read as parentheses; 'x, `x and ,x expand to
// (quote x), (quasiquote x) and (unquote x).
struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;

struct SExpr {
    enum class Kind { Sym, Num, Bool, List };
    Kind kind = Kind::List;
    std::string sym;
    std::int64_t num = 0;
    bool boolean = false;
    std::vector<SExprPtr> items;
    int line = 0, col = 0;

    bool is_sym(const char* s) const { return kind == Kind::Sym && sym == s; }
};

// Reader: comments run from ';' to end of line. Parse errors carry
// line:column.
std::vector<SExprPtr> read_sexprs(const std::string& text);
std::string sexpr_to_string(const SExpr& e);
bool sexpr_equal(const SExpr& a, const SExpr& b);

struct QueryForm {
    RunMode mode = RunMode::Run;
    std::optional<long long> count; // nullopt = all answers
    std::vector<std::string> qvars;
    std::vector<GoalPtr> goals;
    std::string text; // printed source form
};

struct TopForm {
    enum class Kind { Define, Query } kind = Kind::Define;
    RelationDef def; // when Define
    QueryForm query; // when Query
    std::string text;
};

// Top-level forms: defineo/define and run/run*/run-partial. Anything else is
// a parse error naming the offending head.
std::vector<TopForm> parse_program(const std::string& text);
TopForm parse_top_form(const SExprPtr& e);

// Parses one form that must be a query (bench --query input).
QueryForm parse_query_form(const std::string& text);

} // namespace stablerel

#endif
