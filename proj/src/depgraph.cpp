#include "stablerel/depgraph.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "stablerel/diagnostics.hpp"

namespace stablerel {

namespace {

// Walks a body and reports each called predicate with the polarity of the
// call site. Callee arity comes from the argument count.
void scan_calls(const std::vector<GoalPtr>& body,
                const std::function<void(const PredKey&, EdgeSign)>& emit);

void scan_goal(const GoalPtr& g,
               const std::function<void(const PredKey&, EdgeSign)>& emit) {
    switch (g->kind()) {
    case GoalExpr::Kind::Call:
        emit(PredKey{g->callee(), static_cast<int>(g->args().size())}, EdgeSign::Positive);
        break;
    case GoalExpr::Kind::Noto: {
        const GoalPtr& inner = g->inner();
        emit(PredKey{inner->callee(), static_cast<int>(inner->args().size())},
             EdgeSign::Negative);
        break;
    }
    case GoalExpr::Kind::Fresh:
        scan_calls(g->body(), emit);
        break;
    case GoalExpr::Kind::Conde:
        for (const auto& br : g->branches()) scan_calls(br, emit);
        break;
    default:
        break;
    }
}

void scan_calls(const std::vector<GoalPtr>& body,
                const std::function<void(const PredKey&, EdgeSign)>& emit) {
    for (const auto& g : body) scan_goal(g, emit);
}

void check_defined(const Program& p, const PredKey& callee, const PredKey& caller) {
    if (p.find(callee) == nullptr)
        throw Diagnostic(DiagCode::UndefinedRelation,
                         caller.display() + " calls undefined relation " + callee.display());
}

DepGraph build_graph_impl(const Program& p, const std::set<PredKey>* restrict_to) {
    DepGraph g;
    for (const auto& [key, def] : p.relations()) {
        if (def.builtin) continue;
        if (restrict_to && restrict_to->count(key) == 0) continue;
        g.nodes.push_back(key);
        scan_calls(def.body, [&](const PredKey& callee, EdgeSign sign) {
            check_defined(p, callee, key);
            if (p.find(callee)->builtin) return;
            g.edges.insert(DepEdge{key, callee, sign});
        });
    }
    std::sort(g.nodes.begin(), g.nodes.end());
    return g;
}

} // namespace

bool DepGraph::has_node(const PredKey& k) const {
    return std::binary_search(nodes.begin(), nodes.end(), k);
}

std::string classification_name(Classification c) {
    switch (c) {
    case Classification::Definite: return "Definite";
    case Classification::Stratified: return "Stratified";
    case Classification::Normal: return "Normal";
    }
    return "?";
}

DepGraph build_graph(const Program& p) { return build_graph_impl(p, nullptr); }

DepGraph build_graph(const Program& p, const std::set<PredKey>& preds) {
    return build_graph_impl(p, &preds);
}

std::vector<std::set<PredKey>> sccs(const DepGraph& g) {
    // Tarjan over the node list; successor sets ignore edge signs.
    const int n = static_cast<int>(g.nodes.size());
    std::map<PredKey, int> index_of;
    for (int i = 0; i < n; ++i) index_of.emplace(g.nodes[i], i);

    std::vector<std::vector<int>> succ(n);
    for (const auto& e : g.edges) {
        auto from = index_of.find(e.from);
        auto to = index_of.find(e.to);
        if (from == index_of.end() || to == index_of.end()) continue;
        succ[from->second].push_back(to->second);
    }
    for (auto& s : succ) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }

    std::vector<int> number(n, -1), lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    std::vector<std::set<PredKey>> out;
    int counter = 0;

    std::function<void(int)> visit = [&](int v) {
        number[v] = lowlink[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (int w : succ[v]) {
            if (number[w] == -1) {
                visit(w);
                lowlink[v] = std::min(lowlink[v], lowlink[w]);
            } else if (on_stack[w]) {
                lowlink[v] = std::min(lowlink[v], number[w]);
            }
        }
        if (lowlink[v] == number[v]) {
            std::set<PredKey> comp;
            int w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.insert(g.nodes[w]);
            } while (w != v);
            out.push_back(std::move(comp));
        }
    };

    for (int v = 0; v < n; ++v)
        if (number[v] == -1) visit(v);
    // Tarjan emits callees first, which is the reverse topological order we
    // want; nothing to flip.
    return out;
}

namespace {

ClassifyResult classify_graph(const DepGraph& g) {
    ClassifyResult res;
    res.components = sccs(g);

    std::map<PredKey, int> comp_of;
    for (std::size_t i = 0; i < res.components.size(); ++i)
        for (const auto& k : res.components[i]) comp_of.emplace(k, static_cast<int>(i));

    bool any_negative = false;
    for (const auto& e : g.edges) {
        if (e.sign != EdgeSign::Negative) continue;
        any_negative = true;
        if (comp_of.at(e.from) == comp_of.at(e.to)) {
            const auto& comp = res.components[comp_of.at(e.from)];
            if (res.negative_components.empty() ||
                res.negative_components.back() != comp)
                res.negative_components.push_back(comp);
        }
    }

    if (!res.negative_components.empty()) {
        res.classification = Classification::Normal;
        return res;
    }
    res.classification = any_negative ? Classification::Stratified : Classification::Definite;

    // Components arrive callees-first, so each component's stratum only
    // needs the strata of already-processed components.
    std::vector<int> comp_stratum(res.components.size(), 0);
    for (std::size_t i = 0; i < res.components.size(); ++i) {
        int stratum = 0;
        for (const auto& e : g.edges) {
            if (comp_of.at(e.from) != static_cast<int>(i)) continue;
            int dep = comp_of.at(e.to);
            if (dep == static_cast<int>(i)) continue;
            int needed = comp_stratum[dep] + (e.sign == EdgeSign::Negative ? 1 : 0);
            stratum = std::max(stratum, needed);
        }
        comp_stratum[i] = stratum;
        for (const auto& k : res.components[i]) res.strata.emplace(k, stratum);
    }
    return res;
}

} // namespace

ClassifyResult classify(const Program& p) { return classify_graph(build_graph(p)); }

ClassifyResult classify(const Program& p, const std::set<PredKey>& preds) {
    return classify_graph(build_graph(p, preds));
}

std::set<PredKey> cone(const DepGraph& g, const std::set<PredKey>& roots) {
    for (const auto& r : roots)
        if (!g.has_node(r))
            throw std::logic_error("cone root " + r.display() + " is not a graph node");

    std::map<PredKey, std::vector<PredKey>> succ;
    for (const auto& e : g.edges) succ[e.from].push_back(e.to);

    std::set<PredKey> seen(roots.begin(), roots.end());
    std::vector<PredKey> frontier(roots.begin(), roots.end());
    while (!frontier.empty()) {
        PredKey k = frontier.back();
        frontier.pop_back();
        auto it = succ.find(k);
        if (it == succ.end()) continue;
        for (const auto& next : it->second)
            if (seen.insert(next).second) frontier.push_back(next);
    }
    return seen;
}

std::set<PredKey> query_cone(const Program& p, const std::vector<GoalPtr>& goals) {
    // Traverses only from the query's own calls so an unrelated ill-formed
    // relation cannot poison an independent query.
    std::set<PredKey> seen;
    std::vector<PredKey> frontier;
    scan_calls(goals, [&](const PredKey& callee, EdgeSign) {
        check_defined(p, callee, PredKey{"query", 0});
        if (p.find(callee)->builtin) return;
        if (seen.insert(callee).second) frontier.push_back(callee);
    });
    while (!frontier.empty()) {
        PredKey key = frontier.back();
        frontier.pop_back();
        const RelationDef* def = p.find(key);
        scan_calls(def->body, [&](const PredKey& callee, EdgeSign) {
            check_defined(p, callee, key);
            if (p.find(callee)->builtin) return;
            if (seen.insert(callee).second) frontier.push_back(callee);
        });
    }
    return seen;
}

std::string to_dot(const DepGraph& g) {
    std::ostringstream os;
    os << "digraph dependencies {\n";
    for (const auto& n : g.nodes)
        os << "  \"" << n.display() << "\";\n";
    for (const auto& e : g.edges) {
        os << "  \"" << e.from.display() << "\" -> \"" << e.to.display() << "\"";
        if (e.sign == EdgeSign::Negative) os << " [style=dashed, label=\"not\"]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace stablerel
