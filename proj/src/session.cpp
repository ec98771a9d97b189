#include "stablerel/session.hpp"

#include <sstream>

#include "stablerel/diagnostics.hpp"
#include "stablerel/grounder.hpp"

namespace stablerel {

EngineConfig Session::engine_config() const {
    EngineConfig ec;
    ec.auto_dispatch = cfg_.auto_dispatch;
    ec.oracle = cfg_.oracle;
    ec.cap = cfg_.cap;
    ec.step_budget = cfg_.step_budget;
    ec.occurs_check = cfg_.occurs_check;
    return ec;
}

std::string Session::format_answer_line(const QueryOutcome& outcome) {
    std::string line = "(";
    for (std::size_t i = 0; i < outcome.answer_texts.size(); ++i) {
        if (i) line += " ";
        line += outcome.answer_texts[i];
    }
    line += ")";
    return line;
}

std::string Session::exec(const std::string& text) {
    std::string transcript;
    for (const auto& form : parse_program(text)) transcript += exec_form(form);
    return transcript;
}

std::string Session::exec_form(const TopForm& form) {
    if (form.kind == TopForm::Kind::Define) {
        Program::DefineOptions opts;
        opts.legacy_coarse = cfg_.legacy_coarse;
        opts.allow_redefine = cfg_.repl;
        auto warning = prog_.define(form.def, opts);
        if (warning.has_value()) warnings_.push_back(*warning);
        return "";
    }
    QueryOutcome outcome = run_query(form.query, cfg_.mode_override);
    return format_answer_line(outcome) + "\n";
}

QueryOutcome Session::run_query(const QueryForm& q, std::optional<RunMode> override_mode) {
    Engine engine(prog_, vars_, engine_config());
    RunMode mode = override_mode.value_or(q.mode);
    return engine.query(mode, q.count, q.qvars, q.goals);
}

std::vector<std::string> Session::take_warnings() {
    std::vector<std::string> out;
    out.swap(warnings_);
    return out;
}

std::string Session::classify_report() const {
    ClassifyResult cls = classify(prog_);

    std::ostringstream os;
    os << "program: " << classification_name(cls.classification) << "; registry:";
    std::vector<PredKey> reg = prog_.registry_ordered();
    if (reg.empty()) {
        os << " (empty)";
    } else {
        for (const auto& k : reg) os << " " << k.display();
    }
    os << "\n";

    bool any = false;
    for (const auto& [key, def] : prog_.relations()) {
        if (def.builtin) continue;
        any = true;
        os << "  " << key.display() << ": " << (def.negated ? "negated" : "definite");
        auto it = cls.strata.find(key);
        if (it != cls.strata.end()) os << ", stratum " << it->second;
        os << "\n";
    }
    if (!any) os << "  (no relations defined)\n";

    if (!cls.components.empty()) {
        os << "sccs (callees first):\n";
        DepGraph g = build_graph(prog_);
        for (const auto& comp : cls.components) {
            os << "  {";
            bool first = true;
            for (const auto& k : comp) {
                os << (first ? "" : " ") << k.display();
                first = false;
            }
            os << "}";
            bool cyclic = comp.size() > 1;
            bool has_neg = false;
            for (const auto& e : g.edges) {
                if (comp.count(e.from) == 0 || comp.count(e.to) == 0) continue;
                cyclic = true;
                if (e.sign == EdgeSign::Negative) has_neg = true;
            }
            if (cyclic) os << " cyclic";
            if (has_neg) os << ", contains negation";
            os << "\n";
        }
    }
    return os.str();
}

std::string Session::graph_dot() const { return to_dot(build_graph(prog_)); }

std::string Session::ground_dump(const std::optional<std::string>& query_form) const {
    std::set<PredKey> scope;
    std::vector<TermPtr> extra;
    if (query_form.has_value()) {
        QueryForm q = parse_query_form(*query_form);
        VarSource scratch;
        Engine engine(prog_, scratch, engine_config());
        scope = engine.checked_scope(q.goals);
    } else {
        for (const auto& [key, def] : prog_.relations())
            if (!def.builtin) scope.insert(key);
    }
    if (scope.empty()) return "";
    if (auto offender = first_non_groundable(prog_, scope))
        throw Diagnostic(DiagCode::NotGroundable,
                         "relation " + offender->display() +
                             " builds compound terms and cannot be grounded");
    return ground(prog_, scope, extra, GroundMode::Guided).dump();
}

} // namespace stablerel
