// stablerel command line: file runner, REPL, classification and graph
// reports, and a run vs run-partial benchmark. Talks to the engine through
// the C API only.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stablerel.h"

namespace {

struct CommonFlags {
    bool legacy_coarse = false;
    bool auto_dispatch = false;
    bool oracle = false;
    bool occurs_check = false;
    long cap = 24;
    long steps = -1;
    std::string mode = "as-written";
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_flag("--legacy-coarse", f.legacy_coarse,
                  "register every relation for contradiction checking");
    cmd->add_flag("--auto", f.auto_dispatch,
                  "let run skip the global check on definite/stratified scopes");
    cmd->add_flag("--oracle", f.oracle, "force the exhaustive 2^N model search");
    cmd->add_flag("--occurs-check", f.occurs_check, "enable the unification occurs check");
    cmd->add_option("--cap", f.cap, "model enumeration cap (atoms)")->check(CLI::Range(1L, 62L));
    cmd->add_option("--steps", f.steps, "definite search step budget (-1 = unlimited)");
}

struct SessionHandle {
    stablerel_session* s = nullptr;
    SessionHandle() : s(stablerel_session_new()) {}
    ~SessionHandle() { stablerel_session_free(s); }
    SessionHandle(const SessionHandle&) = delete;
    SessionHandle& operator=(const SessionHandle&) = delete;
};

struct OwnedString {
    char* p = nullptr;
    ~OwnedString() { stablerel_string_free(p); }
    std::string str() const { return p == nullptr ? "" : p; }
};

int exit_code(stablerel_status st) {
    switch (st) {
    case STABLEREL_OK: return 0;
    case STABLEREL_ERR_PARSE: return 2;
    default: return 1;
    }
}

int fail(stablerel_session* s, stablerel_status st) {
    std::cerr << "stablerel: " << stablerel_last_error(s) << "\n";
    return exit_code(st);
}

int apply_flags(stablerel_session* s, const CommonFlags& f) {
    struct {
        const char* name;
        long value;
    } opts[] = {
        {"legacy-coarse", f.legacy_coarse ? 1 : 0},
        {"auto", f.auto_dispatch ? 1 : 0},
        {"oracle", f.oracle ? 1 : 0},
        {"occurs-check", f.occurs_check ? 1 : 0},
        {"cap", f.cap},
        {"steps", f.steps},
    };
    for (const auto& o : opts) {
        stablerel_status st = stablerel_set_option(s, o.name, o.value);
        if (st != STABLEREL_OK) return fail(s, st);
    }
    stablerel_status st = stablerel_set_mode(s, f.mode.c_str());
    if (st != STABLEREL_OK) return fail(s, st);
    return 0;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void drain_warnings(stablerel_session* s) {
    OwnedString w;
    if (stablerel_take_warnings(s, &w.p) == STABLEREL_OK && w.p != nullptr && *w.p)
        std::cerr << w.str();
}

int load_file(stablerel_session* s, const std::string& path, bool print_transcript) {
    auto text = read_file(path);
    if (!text.has_value()) {
        std::cerr << "stablerel: cannot read " << path << "\n";
        return 1;
    }
    OwnedString transcript;
    stablerel_status st = stablerel_exec(s, text->c_str(), &transcript.p);
    if (st != STABLEREL_OK) {
        int rc = fail(s, st); // read the error before any further API call
        drain_warnings(s);
        return rc;
    }
    drain_warnings(s);
    if (print_transcript) std::cout << transcript.str();
    return 0;
}

int cmd_run(const std::string& path, const CommonFlags& flags) {
    SessionHandle h;
    if (int rc = apply_flags(h.s, flags)) return rc;
    return load_file(h.s, path, /*print_transcript=*/true);
}

int cmd_repl(const CommonFlags& flags) {
    SessionHandle h;
    if (int rc = apply_flags(h.s, flags)) return rc;
    if (stablerel_set_option(h.s, "repl", 1) != STABLEREL_OK) return 1;

    std::cout << "stablerel " << stablerel_version()
              << " (run/run*/run-partial, defineo; Ctrl-D to exit)\n";
    std::string pending;
    while (true) {
        std::cout << (pending.empty() ? "> " : "  ") << std::flush;
        std::string line;
        if (!std::getline(std::cin, line)) break;
        pending += line + "\n";

        // Wait for balanced parentheses before evaluating.
        int depth = 0;
        bool comment = false;
        for (char c : pending) {
            if (comment) {
                if (c == '\n') comment = false;
                continue;
            }
            if (c == ';') comment = true;
            if (c == '(' || c == '[') ++depth;
            if (c == ')' || c == ']') --depth;
        }
        if (depth > 0) continue;

        OwnedString out;
        stablerel_status st = stablerel_exec(h.s, pending.c_str(), &out.p);
        pending.clear();
        if (st != STABLEREL_OK)
            std::cerr << "error: " << stablerel_last_error(h.s) << "\n";
        else
            std::cout << out.str();
        drain_warnings(h.s);
    }
    std::cout << "\n";
    return 0;
}

int cmd_classify(const std::string& path, const CommonFlags& flags) {
    SessionHandle h;
    if (int rc = apply_flags(h.s, flags)) return rc;
    if (int rc = load_file(h.s, path, /*print_transcript=*/false)) return rc;
    OwnedString report;
    stablerel_status st = stablerel_classify(h.s, &report.p);
    if (st != STABLEREL_OK) return fail(h.s, st);
    std::cout << report.str();
    return 0;
}

int cmd_graph(const std::string& path, const std::string& dot_out,
              const CommonFlags& flags) {
    SessionHandle h;
    if (int rc = apply_flags(h.s, flags)) return rc;
    if (int rc = load_file(h.s, path, /*print_transcript=*/false)) return rc;
    OwnedString dot;
    stablerel_status st = stablerel_graph_dot(h.s, &dot.p);
    if (st != STABLEREL_OK) return fail(h.s, st);
    if (dot_out.empty()) {
        std::cout << dot.str();
    } else {
        std::ofstream out(dot_out, std::ios::binary);
        if (!out) {
            std::cerr << "stablerel: cannot write " << dot_out << "\n";
            return 1;
        }
        out << dot.str();
    }
    return 0;
}

int cmd_ground(const std::string& path, const std::string& query,
               const CommonFlags& flags) {
    SessionHandle h;
    if (int rc = apply_flags(h.s, flags)) return rc;
    if (int rc = load_file(h.s, path, /*print_transcript=*/false)) return rc;
    OwnedString dump;
    stablerel_status st = stablerel_ground_dump(
        h.s, query.empty() ? nullptr : query.c_str(), &dump.p);
    if (st != STABLEREL_OK) return fail(h.s, st);
    std::cout << dump.str();
    return 0;
}

int cmd_bench(const std::string& path, const std::string& query, long reps,
              const CommonFlags& flags) {
    SessionHandle h;
    if (int rc = apply_flags(h.s, flags)) return rc;
    if (int rc = load_file(h.s, path, /*print_transcript=*/false)) return rc;

    OwnedString classify_text;
    if (stablerel_classify(h.s, &classify_text.p) != STABLEREL_OK)
        return fail(h.s, STABLEREL_ERR_DIAGNOSTIC);
    std::string first_line = classify_text.str();
    first_line = first_line.substr(0, first_line.find('\n'));
    bool unique_model_program = first_line.find("Stratified") != std::string::npos ||
                                first_line.find("Definite") != std::string::npos;

    struct ModeReport {
        int count = 0;
        double seconds = 0.0;
    };
    auto measure = [&](const char* mode, ModeReport& report) -> stablerel_status {
        // One measured pass always happens; extra repetitions keep the best
        // (least noisy) time.
        long passes = std::max(1L, reps);
        double best = -1.0;
        for (long i = 0; i < passes; ++i) {
            auto t0 = std::chrono::steady_clock::now();
            int count = 0;
            stablerel_status st = stablerel_query(h.s, query.c_str(), mode, nullptr,
                                                  &count, nullptr);
            auto t1 = std::chrono::steady_clock::now();
            if (st != STABLEREL_OK) return st;
            report.count = count;
            double secs = std::chrono::duration<double>(t1 - t0).count();
            if (best < 0.0 || secs < best) best = secs;
        }
        report.seconds = best;
        return STABLEREL_OK;
    };

    ModeReport partial, full;
    stablerel_status st = measure("run-partial", partial);
    if (st != STABLEREL_OK) return fail(h.s, st);
    st = measure("run", full);
    if (st != STABLEREL_OK) return fail(h.s, st);

    std::cout << "query: " << query << "\n";
    std::cout << "program: " << first_line << "\n";
    std::cout << "answers: run-partial=" << partial.count << " run=" << full.count
              << "\n";
    if (reps > 0) {
        std::printf("time: run-partial=%.6fs run=%.6fs (best of %ld)\n",
                    partial.seconds, full.seconds, reps);
        if (partial.seconds > 0.0)
            std::printf("speedup: %.1fx (run-partial over run)\n",
                        full.seconds / partial.seconds);
    }
    if (partial.count != full.count && unique_model_program) {
        std::cerr << "stablerel: semantic failure: run and run-partial disagree ("
                  << full.count << " vs " << partial.count
                  << ") on a program with a unique stable model\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stablerel - relational logic programming with stable model semantics"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string file, dot_out, query;
    long reps = 3;

    CLI::App* run = app.add_subcommand("run", "execute a program file");
    run->add_option("file", file, "program file")->required();
    run->add_option("--mode", flags.mode, "force run or run-partial for every query")
        ->check(CLI::IsMember({"run", "run-partial", "as-written"}));
    add_common_flags(run, flags);

    CLI::App* repl = app.add_subcommand("repl", "interactive session");
    add_common_flags(repl, flags);

    CLI::App* classify = app.add_subcommand("classify", "report program classification");
    classify->add_option("file", file, "program file")->required();
    add_common_flags(classify, flags);

    CLI::App* graph = app.add_subcommand("graph", "dependency graph in DOT");
    graph->add_option("file", file, "program file")->required();
    graph->add_option("--dot", dot_out, "write DOT to this file instead of stdout");
    add_common_flags(graph, flags);

    CLI::App* ground = app.add_subcommand("ground", "dump the propositional image");
    ground->add_option("file", file, "program file")->required();
    ground->add_option("--query", query, "scope the dump to this query form");
    add_common_flags(ground, flags);

    CLI::App* bench = app.add_subcommand("bench", "time run vs run-partial");
    bench->add_option("file", file, "program file")->required();
    bench->add_option("--query", query, "query form to time")->required();
    bench->add_option("-r,--repetitions", reps, "timing repetitions (0 = counts only)")
        ->check(CLI::Range(0L, 1000L));
    add_common_flags(bench, flags);

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(file, flags);
    if (repl->parsed()) return cmd_repl(flags);
    if (classify->parsed()) return cmd_classify(file, flags);
    if (graph->parsed()) return cmd_graph(file, dot_out, flags);
    if (ground->parsed()) return cmd_ground(file, query, flags);
    if (bench->parsed()) return cmd_bench(file, query, reps, flags);
    return 0;
}
