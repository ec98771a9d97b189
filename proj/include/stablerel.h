/* stablerel - relational logic programming with stable model semantics.
 *
 * C interface over the engine: opaque session handles, status codes, and
 * caller-freed strings. Every function that can fail returns a
 * stablerel_status; the message behind a failure is available through
 * stablerel_last_error until the next call on the same session.
 */

#ifndef STABLEREL_H
#define STABLEREL_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct stablerel_session stablerel_session;

typedef enum {
    STABLEREL_OK = 0,
    STABLEREL_ERR_DIAGNOSTIC = 1, /* engine diagnostic (semantics, limits) */
    STABLEREL_ERR_PARSE = 2,      /* malformed surface syntax */
    STABLEREL_ERR_INVALID = 3,    /* bad handle, option name, or argument */
    STABLEREL_ERR_INTERNAL = 4
} stablerel_status;

stablerel_session* stablerel_session_new(void);
void stablerel_session_free(stablerel_session* s);

/* Boolean options (value 0/1): "legacy-coarse", "auto", "oracle",
 * "occurs-check", "repl".
 * Integer options: "cap" (>= 1), "steps" (definite-search budget; a
 * negative value removes the budget). */
stablerel_status stablerel_set_option(stablerel_session* s, const char* name,
                                      long value);

/* Forces every query to one interface: "run", "run-partial", or
 * "as-written" (the default). */
stablerel_status stablerel_set_mode(stablerel_session* s, const char* mode);

/* Executes top-level forms (defineo/define and the run, run*, run-partial
 * queries). *out receives the transcript: one parenthesized answer list per
 * query. */
stablerel_status stablerel_exec(stablerel_session* s, const char* text, char** out);

/* Runs a single query form under an optional mode override ("run",
 * "run-partial", or NULL for as-written). Output parameters may be NULL:
 * *answers gets the answer line, *count the number of answers, *exhausted
 * whether the search completed before hitting the requested count. */
stablerel_status stablerel_query(stablerel_session* s, const char* form,
                                 const char* mode, char** answers, int* count,
                                 int* exhausted);

/* Classification report: first line is
 * "program: <Definite|Stratified|Normal>; registry: ..." followed by
 * per-relation and per-SCC details. */
stablerel_status stablerel_classify(stablerel_session* s, char** out);

/* Predicate dependency graph in DOT; negative edges dashed. */
stablerel_status stablerel_graph_dot(stablerel_session* s, char** out);

/* Propositional image, one rule per line ("head :- b1, not c1."). With a
 * query form, dumps the scope the run interface would check for it;
 * otherwise dumps the whole program. */
stablerel_status stablerel_ground_dump(stablerel_session* s,
                                       const char* query_form_or_null, char** out);

/* Pending warnings (e.g. REPL redefinitions), one per line; empty string
 * when there are none. Clears the warning buffer. */
stablerel_status stablerel_take_warnings(stablerel_session* s, char** out);

/* Message of the most recent failure on this session. Owned by the session;
 * valid until the next API call on it. */
const char* stablerel_last_error(const stablerel_session* s);

/* Frees strings returned through char** out parameters. */
void stablerel_string_free(char* p);

const char* stablerel_version(void);

#ifdef __cplusplus
}
#endif

#endif /* STABLEREL_H */
