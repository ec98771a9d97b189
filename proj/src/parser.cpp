#include "stablerel/parser.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "stablerel/diagnostics.hpp"

namespace stablerel {

namespace {

[[noreturn]] void parse_error(int line, int col, const std::string& msg) {
    std::ostringstream os;
    os << line << ":" << col << ": " << msg;
    throw Diagnostic(DiagCode::ParseError, os.str());
}

[[noreturn]] void parse_error(const SExpr& at, const std::string& msg) {
    parse_error(at.line, at.col, msg);
}

// ---------------------------------------------------------------------------
// Reader

class Reader {
  public:
    explicit Reader(const std::string& text) : text_(text) {}

    std::vector<SExprPtr> read_all() {
        std::vector<SExprPtr> out;
        skip_ws();
        while (!eof()) {
            out.push_back(read_expr());
            skip_ws();
        }
        return out;
    }

  private:
    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == ';') {
                while (!eof() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    static bool is_delim(char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
               c == '[' || c == ']' || c == '\'' || c == '`' || c == ',' || c == ';';
    }

    SExprPtr make_sym(std::string s, int line, int col) {
        auto e = std::make_shared<SExpr>();
        e->kind = SExpr::Kind::Sym;
        e->sym = std::move(s);
        e->line = line;
        e->col = col;
        return e;
    }

    SExprPtr wrap(const char* head, int line, int col) {
        auto list = std::make_shared<SExpr>();
        list->kind = SExpr::Kind::List;
        list->line = line;
        list->col = col;
        list->items.push_back(make_sym(head, line, col));
        list->items.push_back(read_expr());
        return list;
    }

    SExprPtr read_expr() {
        skip_ws();
        if (eof()) parse_error(line_, col_, "unexpected end of input");
        int line = line_, col = col_;
        char c = peek();

        if (c == '(' || c == '[') {
            char close = (c == '(') ? ')' : ']';
            advance();
            auto list = std::make_shared<SExpr>();
            list->kind = SExpr::Kind::List;
            list->line = line;
            list->col = col;
            while (true) {
                skip_ws();
                if (eof()) parse_error(line, col, "unbalanced parenthesis");
                if (peek() == close) {
                    advance();
                    break;
                }
                if (peek() == ')' || peek() == ']')
                    parse_error(line_, col_, "mismatched bracket");
                if (peek() == '.')
                    parse_error(line_, col_, "dotted pairs are not supported");
                list->items.push_back(read_expr());
            }
            return list;
        }
        if (c == ')' || c == ']') parse_error(line, col, "unexpected closing bracket");
        if (c == '\'') {
            advance();
            return wrap("quote", line, col);
        }
        if (c == '`') {
            advance();
            return wrap("quasiquote", line, col);
        }
        if (c == ',') {
            advance();
            return wrap("unquote", line, col);
        }
        if (c == '#') {
            advance();
            if (eof()) parse_error(line, col, "bad # literal");
            char d = advance();
            if (d != 't' && d != 'f') parse_error(line, col, "bad # literal");
            auto e = std::make_shared<SExpr>();
            e->kind = SExpr::Kind::Bool;
            e->boolean = (d == 't');
            e->line = line;
            e->col = col;
            return e;
        }

        // Symbol or integer.
        std::string token;
        while (!eof() && !is_delim(peek())) token.push_back(advance());
        if (token.empty()) parse_error(line, col, "empty token");
        bool numeric = true;
        std::size_t start = (token[0] == '-' || token[0] == '+') ? 1 : 0;
        if (start == token.size()) numeric = false;
        for (std::size_t i = start; i < token.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(token[i]))) {
                numeric = false;
                break;
            }
        auto e = std::make_shared<SExpr>();
        e->line = line;
        e->col = col;
        if (numeric) {
            e->kind = SExpr::Kind::Num;
            e->num = std::stoll(token);
        } else {
            e->kind = SExpr::Kind::Sym;
            e->sym = std::move(token);
        }
        return e;
    }
};

// ---------------------------------------------------------------------------
// Form compiler

const std::set<std::string>& reserved_heads() {
    static const std::set<std::string> heads = {
        "defineo", "define", "run", "run*", "run-partial", "==", "fresh",
        "conde", "noto", "succeed", "fail", "quote", "quasiquote", "unquote"};
    return heads;
}

using Scope = std::set<std::string>;

TermPtr datum_to_term(const SExpr& e) {
    switch (e.kind) {
    case SExpr::Kind::Sym: return Term::sym(e.sym);
    case SExpr::Kind::Num: return Term::num(e.num);
    case SExpr::Kind::Bool:
        parse_error(e, "boolean literal is not a term");
    case SExpr::Kind::List: {
        std::vector<TermPtr> items;
        for (const auto& it : e.items) items.push_back(datum_to_term(*it));
        return Term::list(items);
    }
    }
    parse_error(e, "bad datum");
}

TermTplPtr compile_quasi(const SExpr& e, const Scope& scope);

TermTplPtr compile_template(const SExpr& e, const Scope& scope) {
    switch (e.kind) {
    case SExpr::Kind::Num:
        return TermTpl::num(e.num);
    case SExpr::Kind::Bool:
        parse_error(e, "boolean literal is not a term");
    case SExpr::Kind::Sym: {
        if (scope.count(e.sym) == 0)
            parse_error(e, "unbound variable '" + e.sym +
                               "' (quote symbols to use them as constants)");
        return TermTpl::var(e.sym);
    }
    case SExpr::Kind::List: {
        if (e.items.empty())
            parse_error(e, "empty application; write '() for the empty list");
        if (e.items[0]->is_sym("quote")) {
            if (e.items.size() != 2) parse_error(e, "quote takes one datum");
            return TermTpl::from_ground(datum_to_term(*e.items[1]));
        }
        if (e.items[0]->is_sym("quasiquote")) {
            if (e.items.size() != 2) parse_error(e, "quasiquote takes one datum");
            return compile_quasi(*e.items[1], scope);
        }
        parse_error(e, "expected a term");
    }
    }
    parse_error(e, "bad term");
}

TermTplPtr compile_quasi(const SExpr& e, const Scope& scope) {
    switch (e.kind) {
    case SExpr::Kind::Sym: return TermTpl::sym(e.sym);
    case SExpr::Kind::Num: return TermTpl::num(e.num);
    case SExpr::Kind::Bool:
        parse_error(e, "boolean literal is not a term");
    case SExpr::Kind::List: {
        if (!e.items.empty() && e.items[0]->is_sym("unquote")) {
            if (e.items.size() != 2) parse_error(e, "unquote takes one expression");
            const SExpr& inner = *e.items[1];
            if (inner.kind != SExpr::Kind::Sym)
                parse_error(inner, "unquote expects a variable");
            if (scope.count(inner.sym) == 0)
                parse_error(inner, "unbound variable '" + inner.sym + "'");
            return TermTpl::var(inner.sym);
        }
        if (!e.items.empty() && e.items[0]->is_sym("quasiquote"))
            parse_error(e, "nested quasiquote is not supported");
        TermTplPtr acc = TermTpl::nil();
        for (auto it = e.items.rbegin(); it != e.items.rend(); ++it)
            acc = TermTpl::pair(compile_quasi(**it, scope), acc);
        return acc;
    }
    }
    parse_error(e, "bad quasiquote datum");
}

GoalPtr compile_goal(const SExpr& e, Scope& scope);

std::vector<GoalPtr> compile_goal_seq(const std::vector<SExprPtr>& items,
                                      std::size_t from, Scope& scope) {
    std::vector<GoalPtr> out;
    for (std::size_t i = from; i < items.size(); ++i)
        out.push_back(compile_goal(*items[i], scope));
    return out;
}

GoalPtr compile_goal(const SExpr& e, Scope& scope) {
    if (e.kind == SExpr::Kind::Sym) {
        if (e.sym == "succeed") return GoalExpr::succeed();
        if (e.sym == "fail") return GoalExpr::fail();
        parse_error(e, "expected a goal, found symbol '" + e.sym + "'");
    }
    if (e.kind != SExpr::Kind::List || e.items.empty())
        parse_error(e, "expected a goal");
    const SExpr& head = *e.items[0];
    if (head.kind != SExpr::Kind::Sym)
        parse_error(head, "goal head must be a symbol");

    if (head.sym == "==") {
        if (e.items.size() != 3) parse_error(e, "== takes two terms");
        return GoalExpr::unify(compile_template(*e.items[1], scope),
                               compile_template(*e.items[2], scope));
    }
    if (head.sym == "fresh") {
        if (e.items.size() < 3) parse_error(e, "fresh takes a variable list and goals");
        const SExpr& vars = *e.items[1];
        if (vars.kind != SExpr::Kind::List)
            parse_error(vars, "fresh variable list must be a list");
        std::vector<std::string> names;
        Scope inner = scope;
        for (const auto& v : vars.items) {
            if (v->kind != SExpr::Kind::Sym)
                parse_error(*v, "fresh variable must be a symbol");
            names.push_back(v->sym);
            inner.insert(v->sym);
        }
        return GoalExpr::fresh(std::move(names), compile_goal_seq(e.items, 2, inner));
    }
    if (head.sym == "conde") {
        if (e.items.size() < 2) parse_error(e, "conde takes at least one branch");
        std::vector<std::vector<GoalPtr>> branches;
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            const SExpr& br = *e.items[i];
            if (br.kind != SExpr::Kind::List || br.items.empty())
                parse_error(br, "conde branch must be a non-empty goal list");
            branches.push_back(compile_goal_seq(br.items, 0, scope));
        }
        return GoalExpr::conde(std::move(branches));
    }
    if (head.sym == "noto") {
        if (e.items.size() != 2) parse_error(e, "noto takes one goal");
        GoalPtr inner = compile_goal(*e.items[1], scope);
        try {
            return GoalExpr::noto(std::move(inner));
        } catch (const Diagnostic& d) {
            parse_error(e, d.what());
        }
    }
    if (head.sym == "succeed" || head.sym == "fail")
        parse_error(e, head.sym + " takes no arguments");
    if (reserved_heads().count(head.sym) > 0 && head.sym != "==")
        parse_error(head, "'" + head.sym + "' cannot appear in goal position");

    // Relation call.
    std::vector<TermTplPtr> args;
    for (std::size_t i = 1; i < e.items.size(); ++i)
        args.push_back(compile_template(*e.items[i], scope));
    return GoalExpr::call(head.sym, std::move(args));
}

RelationDef compile_define(const SExpr& e) {
    if (e.items.size() < 3)
        parse_error(e, "defineo takes a head and at least one goal");
    const SExpr& head = *e.items[1];
    if (head.kind != SExpr::Kind::List || head.items.empty())
        parse_error(head, "defineo head must be (name params ...)");
    if (head.items[0]->kind != SExpr::Kind::Sym)
        parse_error(*head.items[0], "relation name must be a symbol");

    RelationDef def;
    def.name = head.items[0]->sym;
    if (reserved_heads().count(def.name) > 0)
        parse_error(*head.items[0], "'" + def.name + "' is reserved");
    Scope scope;
    for (std::size_t i = 1; i < head.items.size(); ++i) {
        const SExpr& p = *head.items[i];
        if (p.kind != SExpr::Kind::Sym)
            parse_error(p, "relation parameter must be a symbol");
        def.params.push_back(p.sym);
        scope.insert(p.sym);
    }
    def.arity = static_cast<int>(def.params.size());
    def.body = compile_goal_seq(e.items, 2, scope);
    return def;
}

QueryForm compile_query(const SExpr& e) {
    QueryForm q;
    const std::string& head = e.items[0]->sym;
    std::size_t idx = 1;

    if (head == "run" || head == "run-partial") {
        q.mode = (head == "run") ? RunMode::Run : RunMode::RunPartial;
        if (e.items.size() < 4)
            parse_error(e, head + " takes a count, a variable list, and goals");
        const SExpr& count = *e.items[idx++];
        if (count.kind == SExpr::Kind::Num) {
            if (count.num < 0) parse_error(count, "answer count must be non-negative");
            q.count = count.num;
        } else if (count.kind == SExpr::Kind::Bool && !count.boolean) {
            q.count = std::nullopt; // #f = all answers
        } else if (count.is_sym("*")) {
            q.count = std::nullopt;
        } else {
            parse_error(count, "answer count must be an integer, #f, or *");
        }
    } else { // run*
        q.mode = RunMode::Run;
        q.count = std::nullopt;
        if (e.items.size() < 3) parse_error(e, "run* takes a variable list and goals");
    }

    const SExpr& vars = *e.items[idx++];
    if (vars.kind != SExpr::Kind::List || vars.items.empty())
        parse_error(vars, "query variable list must be a non-empty list");
    Scope scope;
    for (const auto& v : vars.items) {
        if (v->kind != SExpr::Kind::Sym)
            parse_error(*v, "query variable must be a symbol");
        if (!scope.insert(v->sym).second)
            parse_error(*v, "duplicate query variable '" + v->sym + "'");
        q.qvars.push_back(v->sym);
    }
    if (idx >= e.items.size()) parse_error(e, "query has no goals");
    q.goals = compile_goal_seq(e.items, idx, scope);
    q.text = sexpr_to_string(e);
    return q;
}

} // namespace

std::vector<SExprPtr> read_sexprs(const std::string& text) {
    Reader r(text);
    return r.read_all();
}

std::string sexpr_to_string(const SExpr& e) {
    switch (e.kind) {
    case SExpr::Kind::Sym: return e.sym;
    case SExpr::Kind::Num: return std::to_string(e.num);
    case SExpr::Kind::Bool: return e.boolean ? "#t" : "#f";
    case SExpr::Kind::List: {
        std::string out = "(";
        for (std::size_t i = 0; i < e.items.size(); ++i) {
            if (i) out += " ";
            out += sexpr_to_string(*e.items[i]);
        }
        out += ")";
        return out;
    }
    }
    return "?";
}

bool sexpr_equal(const SExpr& a, const SExpr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case SExpr::Kind::Sym: return a.sym == b.sym;
    case SExpr::Kind::Num: return a.num == b.num;
    case SExpr::Kind::Bool: return a.boolean == b.boolean;
    case SExpr::Kind::List: {
        if (a.items.size() != b.items.size()) return false;
        for (std::size_t i = 0; i < a.items.size(); ++i)
            if (!sexpr_equal(*a.items[i], *b.items[i])) return false;
        return true;
    }
    }
    return false;
}

TopForm parse_top_form(const SExprPtr& e) {
    if (e->kind != SExpr::Kind::List || e->items.empty())
        parse_error(*e, "expected a top-level form");
    const SExpr& head = *e->items[0];
    if (head.kind != SExpr::Kind::Sym)
        parse_error(head, "top-level form head must be a symbol");

    TopForm form;
    form.text = sexpr_to_string(*e);
    if (head.sym == "defineo" || head.sym == "define") {
        form.kind = TopForm::Kind::Define;
        form.def = compile_define(*e);
        return form;
    }
    if (head.sym == "run" || head.sym == "run*" || head.sym == "run-partial") {
        form.kind = TopForm::Kind::Query;
        form.query = compile_query(*e);
        return form;
    }
    parse_error(head, "unknown top-level form '" + head.sym + "'");
}

std::vector<TopForm> parse_program(const std::string& text) {
    std::vector<TopForm> out;
    for (const auto& e : read_sexprs(text)) out.push_back(parse_top_form(e));
    return out;
}

QueryForm parse_query_form(const std::string& text) {
    std::vector<SExprPtr> exprs = read_sexprs(text);
    if (exprs.size() != 1)
        throw Diagnostic(DiagCode::ParseError, "expected exactly one query form");
    TopForm form = parse_top_form(exprs[0]);
    if (form.kind != TopForm::Kind::Query)
        throw Diagnostic(DiagCode::ParseError, "expected a run/run*/run-partial form");
    return form.query;
}

} // namespace stablerel
