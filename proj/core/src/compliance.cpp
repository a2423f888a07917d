#include "pencil/compliance.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace pencil {

bool is_whitelisted_external(const std::string& name) {
    return name == "exp" || name == "rand";
}

// ---------------------------------------------------------------------------
// Call graph
// ---------------------------------------------------------------------------

namespace {

void walk_calls_expr(const Expr& e, const std::function<void(const Expr&)>& fn) {
    if (e.kind == ExprKind::Call) fn(e);
    for (const auto& a : e.args) walk_calls_expr(*a, fn);
}

void walk_calls_stmt(const Stmt& s, const std::function<void(const Expr&)>& fn) {
    for (const ExprPtr* e : {&s.lvalue, &s.rhs, &s.lo, &s.hi, &s.cond, &s.call})
        if (*e) walk_calls_expr(**e, fn);
    for (const auto& e : s.decl_extents) walk_calls_expr(*e, fn);
    for (const auto& c : s.stmts) walk_calls_stmt(*c, fn);
    for (const StmtPtr* c : {&s.body, &s.then_branch, &s.else_branch})
        if (*c) walk_calls_stmt(**c, fn);
}

}  // namespace

CallGraph build_call_graph(const Ast& ast, std::vector<Diagnostic>* diags) {
    CallGraph g;
    std::set<std::string> defined;
    for (const auto& fn : ast.functions) {
        g.nodes.push_back(fn.name);
        defined.insert(fn.name);
    }
    for (const auto& fn : ast.functions) {
        if (!fn.body) continue;
        walk_calls_stmt(*fn.body, [&](const Expr& call) {
            if (defined.count(call.name)) {
                g.edges.push_back({fn.name, call.name, call.loc});
            } else if (!is_whitelisted_external(call.name) && diags) {
                diags->push_back({"E-UNDEF", Severity::Error,
                                  "call to undefined function '" + call.name + "'", call.loc,
                                  std::nullopt});
            }
        });
    }
    return g;
}

std::vector<Diagnostic> check_no_recursion(const CallGraph& graph) {
    // Tarjan SCC over the condensed adjacency.
    std::map<std::string, std::vector<std::string>> adj;
    std::set<std::pair<std::string, std::string>> self_loops;
    for (const auto& e : graph.edges) {
        adj[e.caller].push_back(e.callee);
        if (e.caller == e.callee) self_loops.insert({e.caller, e.callee});
    }

    std::map<std::string, int> index, lowlink;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    int next_index = 0;
    std::vector<std::vector<std::string>> cyclic_sccs;

    std::function<void(const std::string&)> strongconnect = [&](const std::string& v) {
        index[v] = lowlink[v] = next_index++;
        stack.push_back(v);
        on_stack.insert(v);
        for (const auto& w : adj[v]) {
            if (!index.count(w)) {
                strongconnect(w);
                lowlink[v] = std::min(lowlink[v], lowlink[w]);
            } else if (on_stack.count(w)) {
                lowlink[v] = std::min(lowlink[v], index[w]);
            }
        }
        if (lowlink[v] == index[v]) {
            std::vector<std::string> scc;
            while (true) {
                std::string w = stack.back();
                stack.pop_back();
                on_stack.erase(w);
                scc.push_back(w);
                if (w == v) break;
            }
            bool cyclic = scc.size() > 1 || self_loops.count({v, v});
            if (cyclic) {
                std::sort(scc.begin(), scc.end());
                cyclic_sccs.push_back(std::move(scc));
            }
        }
    };
    for (const auto& n : graph.nodes)
        if (!index.count(n)) strongconnect(n);

    std::vector<Diagnostic> out;
    for (const auto& scc : cyclic_sccs) {
        std::string members;
        for (const auto& m : scc) {
            if (!members.empty()) members += ", ";
            members += m;
        }
        // locate one participating call site for the report
        SourceLoc loc;
        for (const auto& e : graph.edges) {
            if (std::find(scc.begin(), scc.end(), e.caller) != scc.end() &&
                std::find(scc.begin(), scc.end(), e.callee) != scc.end()) {
                loc = e.loc;
                break;
            }
        }
        out.push_back({"R6", Severity::Error, "recursion among {" + members + "}", loc,
                       std::nullopt});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rule checks
// ---------------------------------------------------------------------------

namespace {

class RuleChecker {
  public:
    RuleChecker(const Ast& ast, std::vector<Diagnostic>& out) : ast_(ast), out_(out) {
        for (const auto& fn : ast.functions)
            if (fn.access) summary_fns_.insert(fn.access->callee);
    }

    void run() {
        for (const auto& fn : ast_.functions) check_function(fn);
    }

  private:
    void report(const std::string& code, Severity sev, const std::string& msg, SourceLoc loc) {
        out_.push_back({code, sev, msg, loc, std::nullopt});
    }

    void check_function(const FunctionDef& fn) {
        pointer_names_.clear();
        for (const auto& p : fn.params) {
            switch (p.kind) {
                case ParamKind::Array: {
                    std::string missing;
                    if (!p.has_restrict) missing += "restrict ";
                    if (!p.has_const) missing += "const ";
                    if (!missing.empty())
                        report("R1", Severity::Error,
                               "array parameter '" + p.name + "' missing qualifier(s): " + missing,
                               p.loc);
                    if (!p.has_static)
                        report("R1", Severity::Warning,
                               "array parameter '" + p.name + "' missing 'static' qualifier",
                               p.loc);
                    break;
                }
                case ParamKind::ScalarPointer:
                    pointer_names_.insert(p.name);
                    if (!p.has_const || !p.has_restrict)
                        report("R2", Severity::Error,
                               "pointer parameter '" + p.name +
                                   "' must be declared 'const restrict'",
                               p.loc);
                    break;
                case ParamKind::PointerArray:
                    pointer_names_.insert(p.name);
                    report("R8", Severity::Error,
                           "parameter '" + p.name + "' is an array of pointers", p.loc);
                    break;
                case ParamKind::Scalar:
                    break;
            }
        }
        bool in_summary = summary_fns_.count(fn.name) > 0;
        if (fn.body) check_stmt(*fn.body, in_summary);
    }

    void check_stmt(const Stmt& s, bool in_summary) {
        switch (s.kind) {
            case StmtKind::Decl:
                if (s.decl_is_pointer) {
                    pointer_names_.insert(s.name);
                    report("R3", Severity::Error, "local pointer declaration '" + s.name + "'",
                           s.loc);
                }
                if (s.rhs) check_expr(*s.rhs);
                break;
            case StmtKind::Goto:
                report("R5", Severity::Error, "goto '" + s.name + "' is unstructured control flow",
                       s.loc);
                break;
            case StmtKind::SummaryAccess:
                if (!in_summary)
                    report("R7", Severity::Error,
                           summary_spelling(s.summary_kind) +
                               " used outside an access-summary function",
                           s.loc);
                check_expr(*s.lvalue);
                break;
            case StmtKind::Assign:
                // reseating a pointer is banned along with all pointer math
                if (s.lvalue->kind == ExprKind::Var && pointer_names_.count(s.lvalue->name))
                    report("R4", Severity::Error,
                           "assignment to pointer '" + s.lvalue->name + "' itself", s.loc);
                check_expr(*s.lvalue);
                check_expr(*s.rhs);
                break;
            default:
                break;
        }
        for (const ExprPtr* e : {&s.lo, &s.hi, &s.cond, &s.call})
            if (*e) check_expr(**e);
        for (const auto& e : s.decl_extents) check_expr(*e);
        for (const auto& c : s.stmts) check_stmt(*c, in_summary);
        for (const StmtPtr* c : {&s.body, &s.then_branch, &s.else_branch})
            if (*c) check_stmt(**c, in_summary);
    }

    void check_expr(const Expr& e) {
        if (e.kind == ExprKind::Unary && e.un_op == UnOp::AddrOf)
            report("R4", Severity::Error, "address-of is not allowed", e.loc);
        if (e.kind == ExprKind::Binary &&
            (e.bin_op == BinOp::Add || e.bin_op == BinOp::Sub)) {
            for (const auto& a : e.args) {
                if (a->kind == ExprKind::Var && pointer_names_.count(a->name))
                    report("R4", Severity::Error,
                           "pointer arithmetic on '" + a->name + "'", a->loc);
            }
        }
        for (const auto& a : e.args) check_expr(*a);
    }

    const Ast& ast_;
    std::vector<Diagnostic>& out_;
    std::set<std::string> summary_fns_;
    std::set<std::string> pointer_names_;
};

}  // namespace

std::vector<Diagnostic> check_compliance(const Ast& ast) {
    std::vector<Diagnostic> out;
    RuleChecker(ast, out).run();
    CallGraph graph = build_call_graph(ast, &out);
    for (auto& d : check_no_recursion(graph)) out.push_back(std::move(d));
    std::stable_sort(out.begin(), out.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.loc < b.loc; });
    return out;
}

}  // namespace pencil
