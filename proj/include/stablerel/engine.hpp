#ifndef STABLEREL_ENGINE_HPP
#define STABLEREL_ENGINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "stablerel/depgraph.hpp"
#include "stablerel/grounder.hpp"
#include "stablerel/program.hpp"
#include "stablerel/stable_models.hpp"
#include "stablerel/term.hpp"

namespace stablerel {

struct EngineConfig {
    bool auto_dispatch = false; // classify the checked scope; skip the global
                                // check when it is Definite or Stratified
    bool oracle = false;        // force the verbatim 2^N model enumeration
    int cap = 24;               // enumeration width cap
    std::optional<long long> step_budget; // definite search steps
    bool occurs_check = false;
};

enum class RunMode { Run, RunPartial };

struct QueryOutcome {
    std::vector<TermPtr> answers;          // reified terms
    std::vector<std::string> answer_texts; // printed forms, same order
    bool exhausted = false; // search completed before hitting the count
};

// Resolves queries against an immutable Program snapshot. Definite cones run
// through interleaved stream search; negation-bearing cones are grounded and
// answered bravely against their stable models. Run additionally admits an
// answer only when the global checked scope (query cone + registry + registry
// cones) has a stable model consistent with it.
class Engine {
  public:
    Engine(const Program& program, VarSource& vars, EngineConfig config)
        : prog_(program), vars_(vars), cfg_(config) {}

    // n = nullopt means all answers.
    QueryOutcome query(RunMode mode, std::optional<long long> n,
                       const std::vector<std::string>& qvars,
                       const std::vector<GoalPtr>& goals) const;

    // Scope the run interface checks for this query: query cone + registry +
    // registry cones. Exposed for reports and tests.
    std::set<PredKey> checked_scope(const std::vector<GoalPtr>& goals) const;

  private:
    const Program& prog_;
    VarSource& vars_;
    EngineConfig cfg_;
};

} // namespace stablerel

#endif
