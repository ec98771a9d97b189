#include "stablerel.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "stablerel/diagnostics.hpp"
#include "stablerel/session.hpp"

struct stablerel_session {
    stablerel::Session session;
    std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

stablerel_status status_of(const stablerel::Diagnostic& d) {
    return d.is_parse_error() ? STABLEREL_ERR_PARSE : STABLEREL_ERR_DIAGNOSTIC;
}

template <typename Fn>
stablerel_status guarded(stablerel_session* s, Fn&& fn) {
    if (s == nullptr) return STABLEREL_ERR_INVALID;
    s->last_error.clear();
    try {
        return fn();
    } catch (const stablerel::Diagnostic& d) {
        s->last_error = d.what();
        return status_of(d);
    } catch (const std::exception& e) {
        s->last_error = e.what();
        return STABLEREL_ERR_INTERNAL;
    } catch (...) {
        s->last_error = "unknown error";
        return STABLEREL_ERR_INTERNAL;
    }
}

std::optional<stablerel::RunMode> parse_mode(const char* mode, bool& ok) {
    ok = true;
    if (mode == nullptr || std::strcmp(mode, "as-written") == 0) return std::nullopt;
    if (std::strcmp(mode, "run") == 0) return stablerel::RunMode::Run;
    if (std::strcmp(mode, "run-partial") == 0) return stablerel::RunMode::RunPartial;
    ok = false;
    return std::nullopt;
}

} // namespace

extern "C" {

stablerel_session* stablerel_session_new(void) {
    return new (std::nothrow) stablerel_session();
}

void stablerel_session_free(stablerel_session* s) { delete s; }

stablerel_status stablerel_set_option(stablerel_session* s, const char* name,
                                      long value) {
    if (s == nullptr || name == nullptr) return STABLEREL_ERR_INVALID;
    s->last_error.clear();
    stablerel::SessionConfig& cfg = s->session.config();
    std::string key = name;
    if (key == "legacy-coarse")
        cfg.legacy_coarse = (value != 0);
    else if (key == "auto")
        cfg.auto_dispatch = (value != 0);
    else if (key == "oracle")
        cfg.oracle = (value != 0);
    else if (key == "occurs-check")
        cfg.occurs_check = (value != 0);
    else if (key == "repl")
        cfg.repl = (value != 0);
    else if (key == "cap") {
        if (value < 1) {
            s->last_error = "cap must be at least 1";
            return STABLEREL_ERR_INVALID;
        }
        cfg.cap = static_cast<int>(value);
    } else if (key == "steps") {
        if (value < 0)
            cfg.step_budget.reset();
        else
            cfg.step_budget = value;
    } else {
        s->last_error = "unknown option '" + key + "'";
        return STABLEREL_ERR_INVALID;
    }
    return STABLEREL_OK;
}

stablerel_status stablerel_set_mode(stablerel_session* s, const char* mode) {
    if (s == nullptr) return STABLEREL_ERR_INVALID;
    s->last_error.clear();
    bool ok = false;
    auto parsed = parse_mode(mode, ok);
    if (!ok) {
        s->last_error = "mode must be run, run-partial, or as-written";
        return STABLEREL_ERR_INVALID;
    }
    s->session.config().mode_override = parsed;
    return STABLEREL_OK;
}

stablerel_status stablerel_exec(stablerel_session* s, const char* text, char** out) {
    if (text == nullptr) return STABLEREL_ERR_INVALID;
    return guarded(s, [&]() {
        std::string transcript = s->session.exec(text);
        if (out != nullptr) *out = dup_string(transcript);
        return STABLEREL_OK;
    });
}

stablerel_status stablerel_query(stablerel_session* s, const char* form,
                                 const char* mode, char** answers, int* count,
                                 int* exhausted) {
    if (form == nullptr) return STABLEREL_ERR_INVALID;
    bool mode_ok = false;
    auto override_mode = parse_mode(mode, mode_ok);
    if (!mode_ok) {
        if (s != nullptr) s->last_error = "mode must be run, run-partial, or as-written";
        return STABLEREL_ERR_INVALID;
    }
    return guarded(s, [&]() {
        stablerel::QueryForm q = stablerel::parse_query_form(form);
        stablerel::QueryOutcome outcome = s->session.run_query(q, override_mode);
        if (answers != nullptr)
            *answers = dup_string(stablerel::Session::format_answer_line(outcome));
        if (count != nullptr) *count = static_cast<int>(outcome.answers.size());
        if (exhausted != nullptr) *exhausted = outcome.exhausted ? 1 : 0;
        return STABLEREL_OK;
    });
}

stablerel_status stablerel_classify(stablerel_session* s, char** out) {
    return guarded(s, [&]() {
        std::string report = s->session.classify_report();
        if (out != nullptr) *out = dup_string(report);
        return STABLEREL_OK;
    });
}

stablerel_status stablerel_graph_dot(stablerel_session* s, char** out) {
    return guarded(s, [&]() {
        std::string dot = s->session.graph_dot();
        if (out != nullptr) *out = dup_string(dot);
        return STABLEREL_OK;
    });
}

stablerel_status stablerel_ground_dump(stablerel_session* s,
                                       const char* query_form_or_null, char** out) {
    return guarded(s, [&]() {
        std::optional<std::string> form;
        if (query_form_or_null != nullptr) form = query_form_or_null;
        std::string dump = s->session.ground_dump(form);
        if (out != nullptr) *out = dup_string(dump);
        return STABLEREL_OK;
    });
}

stablerel_status stablerel_take_warnings(stablerel_session* s, char** out) {
    return guarded(s, [&]() {
        std::string joined;
        for (const auto& w : s->session.take_warnings()) {
            joined += w;
            joined += "\n";
        }
        if (out != nullptr) *out = dup_string(joined);
        return STABLEREL_OK;
    });
}

const char* stablerel_last_error(const stablerel_session* s) {
    return s == nullptr ? "" : s->last_error.c_str();
}

void stablerel_string_free(char* p) { std::free(p); }

const char* stablerel_version(void) { return "0.1.0"; }

} // extern "C"
