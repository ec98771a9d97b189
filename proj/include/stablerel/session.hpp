#ifndef STABLEREL_SESSION_HPP
#define STABLEREL_SESSION_HPP

#include <optional>
#include <string>
#include <vector>

#include "stablerel/engine.hpp"
#include "stablerel/parser.hpp"
#include "stablerel/program.hpp"

namespace stablerel {

struct SessionConfig {
    bool legacy_coarse = false; // register every relation (the old behavior)
    bool auto_dispatch = false; // --auto
    bool oracle = false;        // --oracle
    int cap = 24;               // --cap
    std::optional<long long> step_budget; // --steps
    bool occurs_check = false;
    std::optional<RunMode> mode_override; // --mode, applied to every query
    bool repl = false; // allow redefinition (with a warning)
};

// One interactive or file-driven evaluation session: owns the program, the
// variable counter, and pending warnings.
class Session {
  public:
    explicit Session(SessionConfig cfg = {}) : cfg_(cfg) {}

    // Executes top-level forms; returns the transcript (one parenthesized
    // answer list per query, newline-terminated).
    std::string exec(const std::string& text);

    // Executes a single already-parsed form; returns its transcript line
    // ("" for definitions).
    std::string exec_form(const TopForm& form);

    QueryOutcome run_query(const QueryForm& q, std::optional<RunMode> override_mode);

    std::string classify_report() const;
    std::string graph_dot() const;
    // Propositional image: of the query's checked scope when a form is
    // given, of the whole program otherwise.
    std::string ground_dump(const std::optional<std::string>& query_form) const;

    std::vector<std::string> take_warnings();

    const Program& program() const { return prog_; }
    const SessionConfig& config() const { return cfg_; }
    SessionConfig& config() { return cfg_; }

    static std::string format_answer_line(const QueryOutcome& outcome);

  private:
    SessionConfig cfg_;
    Program prog_;
    VarSource vars_;
    std::vector<std::string> warnings_;

    EngineConfig engine_config() const;
};

} // namespace stablerel

#endif
