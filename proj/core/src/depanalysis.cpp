#include "pencil/depanalysis.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pencil/compliance.hpp"

namespace pencil {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Parallel: return "PARALLEL";
        case Verdict::ParallelWithReduction: return "PARALLEL_WITH_REDUCTION";
        case Verdict::Serial: return "SERIAL";
        case Verdict::Unknown: return "UNKNOWN";
        case Verdict::AssumedParallel: return "ASSUMED_PARALLEL";
    }
    return "?";
}

std::string basis_name(Basis b) {
    switch (b) {
        case Basis::Enumeration: return "ENUMERATION";
        case Basis::Affine: return "AFFINE";
        case Basis::Directive: return "DIRECTIVE";
    }
    return "?";
}

std::string dep_kind_name(DepKind k) {
    switch (k) {
        case DepKind::RAW: return "RAW";
        case DepKind::WAR: return "WAR";
        case DepKind::WAW: return "WAW";
    }
    return "?";
}

namespace {

std::optional<long long> eval_const(const Expr& e, const ParamBinding& binding) {
    switch (e.kind) {
        case ExprKind::IntLit:
            return e.int_val;
        case ExprKind::Var: {
            auto it = binding.scalars.find(e.name);
            if (it != binding.scalars.end()) return it->second;
            return std::nullopt;
        }
        case ExprKind::Binary: {
            auto a = eval_const(*e.args[0], binding);
            auto b = eval_const(*e.args[1], binding);
            if (!a || !b) return std::nullopt;
            switch (e.bin_op) {
                case BinOp::Add: return *a + *b;
                case BinOp::Sub: return *a - *b;
                case BinOp::Mul: return *a * *b;
                case BinOp::Div: return *b == 0 ? std::nullopt : std::optional<long long>(*a / *b);
                case BinOp::Mod: return *b == 0 ? std::nullopt : std::optional<long long>(*a % *b);
                default: return std::nullopt;
            }
        }
        case ExprKind::Unary:
            if (e.un_op == UnOp::Neg) {
                auto a = eval_const(*e.args[0], binding);
                if (a) return -*a;
            }
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

}  // namespace

std::vector<IterationAccess> collect_iteration_accesses(const Ast& ast,
                                                        const ResolvedSummaries& resolved,
                                                        const Stmt& loop,
                                                        const ParamBinding& binding,
                                                        long long budget) {
    if (loop.kind != StmtKind::For)
        throw PencilError("E-BINDING-REQUIRED", "iteration enumeration needs a for-loop", loop.loc);
    auto lo = eval_const(*loop.lo, binding);
    auto hi = eval_const(*loop.hi, binding);
    if (!lo || !hi)
        throw PencilError("E-BINDING-REQUIRED",
                          "loop bounds are not evaluable under the given binding", loop.loc);
    std::vector<IterationAccess> out;
    for (long long k = *lo; k < *hi; ++k) {
        AccessResult r = collect_accesses(ast, resolved, *loop.body, binding, {{loop.name, k}},
                                          budget);
        IterationAccess ia;
        ia.iteration = k;
        ia.triple = std::move(r.triple);
        out.push_back(std::move(ia));
    }
    return out;
}

std::vector<DependenceWitness> brute_force_dependences(
    const std::vector<IterationAccess>& accesses) {
    for (const auto& ia : accesses) {
        for (const auto* bucket : {&ia.triple.read, &ia.triple.must_write, &ia.triple.may_write})
            for (const auto& r : *bucket)
                if (r.unknown_index)
                    throw PencilError("E-UNKNOWN-INDEX",
                                      "access with unresolvable index on '" + r.array + "'");
    }

    std::vector<DependenceWitness> out;
    std::set<std::string> seen;
    auto add = [&](DepKind kind, const IterationAccess& src, const IterationAccess& sink,
                   const AccessRecord& a, const AccessRecord& b) {
        DependenceWitness w;
        w.kind = kind;
        w.src_iter = src.iteration;
        w.sink_iter = sink.iteration;
        w.array = a.array;
        w.index = a.index;
        w.src_label = a.stmt_label;
        w.sink_label = b.stmt_label;
        w.src_op = a.compound_op;
        w.sink_op = b.compound_op;
        std::string key = dep_kind_name(kind) + "|" + std::to_string(w.src_iter) + "|" +
                          std::to_string(w.sink_iter) + "|" + w.array + "|";
        for (long long v : w.index) key += std::to_string(v) + ",";
        key += "|" + w.src_label + "|" + w.sink_label + "|" + std::string(1, w.src_op) +
               std::string(1, w.sink_op);
        if (seen.insert(key).second) out.push_back(std::move(w));
    };

    for (size_t i = 0; i < accesses.size(); ++i) {
        for (size_t j = i + 1; j < accesses.size(); ++j) {
            const auto& a = accesses[i];
            const auto& b = accesses[j];
            // may_write is the complete write set (must_write is a subset)
            for (const auto& w : a.triple.may_write) {
                for (const auto& r : b.triple.read)
                    if (w.same_cell(r)) add(DepKind::RAW, a, b, w, r);
                for (const auto& w2 : b.triple.may_write)
                    if (w.same_cell(w2)) add(DepKind::WAW, a, b, w, w2);
            }
            for (const auto& r : a.triple.read)
                for (const auto& w : b.triple.may_write)
                    if (r.same_cell(w)) add(DepKind::WAR, a, b, r, w);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Affine fast path
// ---------------------------------------------------------------------------

namespace {

struct AffinePair {
    long long scale = 0, offset = 0;
    bool operator==(const AffinePair&) const = default;
};

std::optional<AffinePair> affine_form(const Expr& e, const std::string& var) {
    switch (e.kind) {
        case ExprKind::IntLit:
            return AffinePair{0, e.int_val};
        case ExprKind::Var:
            if (e.name == var) return AffinePair{1, 0};
            return std::nullopt;  // symbolic, not a compile-time constant
        case ExprKind::Unary: {
            if (e.un_op != UnOp::Neg) return std::nullopt;
            auto a = affine_form(*e.args[0], var);
            if (!a) return std::nullopt;
            return AffinePair{-a->scale, -a->offset};
        }
        case ExprKind::Binary: {
            auto a = affine_form(*e.args[0], var);
            auto b = affine_form(*e.args[1], var);
            if (!a || !b) return std::nullopt;
            switch (e.bin_op) {
                case BinOp::Add: return AffinePair{a->scale + b->scale, a->offset + b->offset};
                case BinOp::Sub: return AffinePair{a->scale - b->scale, a->offset - b->offset};
                case BinOp::Mul:
                    if (a->scale == 0) return AffinePair{a->offset * b->scale, a->offset * b->offset};
                    if (b->scale == 0) return AffinePair{b->offset * a->scale, b->offset * a->offset};
                    return std::nullopt;
                default: return std::nullopt;
            }
        }
        default:
            return std::nullopt;
    }
}

struct AffineAccesses {
    std::map<std::string, std::vector<AffinePair>> writes;
    std::map<std::string, std::vector<AffinePair>> reads;
    bool ok = true;
};

void scan_affine_expr(const Expr& e, const std::string& var, AffineAccesses& acc) {
    if (!acc.ok) return;
    switch (e.kind) {
        case ExprKind::Index: {
            if (e.args.size() != 1) {
                acc.ok = false;
                return;
            }
            auto p = affine_form(*e.args[0], var);
            if (!p) {
                acc.ok = false;
                return;
            }
            acc.reads[e.name].push_back(*p);
            return;  // subscripts are affine by construction; nothing below
        }
        case ExprKind::Call:
            if (!is_whitelisted_external(e.name)) {
                acc.ok = false;
                return;
            }
            break;
        case ExprKind::Unary:
            if (e.un_op == UnOp::AddrOf || e.un_op == UnOp::Deref) {
                acc.ok = false;
                return;
            }
            break;
        default:
            break;
    }
    for (const auto& a : e.args) scan_affine_expr(*a, var, acc);
}

void scan_affine_stmt(const Stmt& s, const std::string& var, AffineAccesses& acc) {
    if (!acc.ok) return;
    switch (s.kind) {
        case StmtKind::Block:
            for (const auto& c : s.stmts) scan_affine_stmt(*c, var, acc);
            return;
        case StmtKind::Labeled:
            scan_affine_stmt(*s.body, var, acc);
            return;
        case StmtKind::Assign: {
            if (s.lvalue->kind != ExprKind::Index || s.lvalue->args.size() != 1) {
                acc.ok = false;  // scalar writes leave the fast path
                return;
            }
            auto p = affine_form(*s.lvalue->args[0], var);
            if (!p) {
                acc.ok = false;
                return;
            }
            acc.writes[s.lvalue->name].push_back(*p);
            if (s.assign_op != AssignOp::Set) acc.reads[s.lvalue->name].push_back(*p);
            scan_affine_expr(*s.rhs, var, acc);
            return;
        }
        default:
            acc.ok = false;
    }
}

}  // namespace

std::optional<Verdict> affine_fast_path(const Stmt& loop) {
    if (loop.kind != StmtKind::For) return std::nullopt;
    AffineAccesses acc;
    scan_affine_stmt(*loop.body, loop.name, acc);
    if (!acc.ok || acc.writes.empty()) return std::nullopt;
    for (const auto& [array, writes] : acc.writes) {
        const AffinePair& w = writes.front();
        if (w.scale == 0) return std::nullopt;
        for (const auto& other : writes)
            if (!(other == w)) return std::nullopt;
        auto it = acc.reads.find(array);
        if (it == acc.reads.end()) continue;
        for (const auto& r : it->second) {
            if (r == w) continue;  // same cell, intra-iteration only
            if (r.scale != w.scale) return std::nullopt;
            if ((r.offset - w.offset) % w.scale == 0) return std::nullopt;
        }
    }
    return Verdict::Parallel;
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

namespace {

char reduction_op_char(const std::string& op) {
    if (op == "+") return '+';
    if (op == "*") return '*';
    return 0;  // max/min have no compound-assignment spelling
}

AssignOp reduction_assign_op(char c) { return c == '*' ? AssignOp::Mul : AssignOp::Add; }

bool expr_mentions(const Expr& e, const std::set<std::string>& names) {
    if ((e.kind == ExprKind::Var || e.kind == ExprKind::Index || e.kind == ExprKind::Call) &&
        names.count(e.name))
        return true;
    for (const auto& a : e.args)
        if (expr_mentions(*a, names)) return true;
    return false;
}

bool expr_calls_only_whitelisted(const Expr& e) {
    if (e.kind == ExprKind::Call && !is_whitelisted_external(e.name)) return false;
    for (const auto& a : e.args)
        if (!expr_calls_only_whitelisted(*a)) return false;
    return true;
}

// Every statement is a matching `x op= e` on a declared reduction scalar,
// with e never touching a reduction scalar; branching is allowed.
bool syntactic_reduction(const Stmt& s, const std::set<std::string>& vars, char op) {
    switch (s.kind) {
        case StmtKind::Block:
            return std::all_of(s.stmts.begin(), s.stmts.end(), [&](const StmtPtr& c) {
                return syntactic_reduction(*c, vars, op);
            });
        case StmtKind::Labeled:
            return syntactic_reduction(*s.body, vars, op);
        case StmtKind::If: {
            if (expr_mentions(*s.cond, vars) || !expr_calls_only_whitelisted(*s.cond)) return false;
            if (s.then_branch && !syntactic_reduction(*s.then_branch, vars, op)) return false;
            if (s.else_branch && !syntactic_reduction(*s.else_branch, vars, op)) return false;
            return true;
        }
        case StmtKind::Assign: {
            if (s.lvalue->kind != ExprKind::Var || !vars.count(s.lvalue->name)) return false;
            if (s.assign_op != reduction_assign_op(op)) return false;
            return !expr_mentions(*s.rhs, vars) && expr_calls_only_whitelisted(*s.rhs);
        }
        case StmtKind::Decl:
            return !s.rhs || (!expr_mentions(*s.rhs, vars) && expr_calls_only_whitelisted(*s.rhs));
        default:
            return false;
    }
}

bool witness_touches_labels(const DependenceWitness& w, const std::vector<std::string>& labels) {
    for (const auto& l : labels)
        if (w.src_label == l || w.sink_label == l) return true;
    return false;
}

bool witness_is_reduction(const DependenceWitness& w, const std::set<std::string>& vars, char op) {
    return op != 0 && vars.count(w.array) && w.src_op == op && w.sink_op == op;
}

}  // namespace

DependenceReport analyze_loop(const Ast& ast, const ResolvedSummaries& resolved, const Stmt& loop,
                              const ParamBinding* binding, long long budget) {
    DependenceReport rep;
    rep.loop_id = loop.loop_id;
    rep.loc = loop.loc;

    const Directive* indep = nullptr;
    const Directive* red = nullptr;
    for (const auto& d : loop.directives) {
        if (d.kind == Directive::Kind::Independent && !indep) indep = &d;
        if (d.kind == Directive::Kind::Reduction && !red) red = &d;
    }

    // an unlabeled independent covers every statement in the body
    if (indep && indep->labels.empty()) {
        rep.verdict = Verdict::AssumedParallel;
        rep.basis = Basis::Directive;
        return rep;
    }

    ParamBinding empty;
    const ParamBinding& bind = binding ? *binding : empty;
    std::optional<std::vector<DependenceWitness>> witnesses;
    try {
        auto accesses = collect_iteration_accesses(ast, resolved, loop, bind, budget);
        witnesses = brute_force_dependences(accesses);
    } catch (const PencilError& e) {
        rep.note = e.what();
    }

    bool directive_discarded = false;
    if (witnesses) {
        if (indep) {
            auto& w = *witnesses;
            size_t before = w.size();
            w.erase(std::remove_if(w.begin(), w.end(),
                                   [&](const DependenceWitness& x) {
                                       return witness_touches_labels(x, indep->labels);
                                   }),
                    w.end());
            directive_discarded |= w.size() != before;
        }
        if (red) {
            std::set<std::string> vars(red->scalars.begin(), red->scalars.end());
            char op = reduction_op_char(red->reduction_op);
            auto& w = *witnesses;
            size_t before = w.size();
            w.erase(std::remove_if(w.begin(), w.end(),
                                   [&](const DependenceWitness& x) {
                                       return witness_is_reduction(x, vars, op);
                                   }),
                    w.end());
            if (w.size() != before && w.empty()) {
                rep.verdict = Verdict::ParallelWithReduction;
                rep.basis = Basis::Directive;
                rep.reduction_vars = red->scalars;
                return rep;
            }
        }
        if (witnesses->empty() && directive_discarded) {
            rep.verdict = Verdict::AssumedParallel;
            rep.basis = Basis::Directive;
            return rep;
        }
    } else if (red) {
        std::set<std::string> vars(red->scalars.begin(), red->scalars.end());
        char op = reduction_op_char(red->reduction_op);
        if (op != 0 && syntactic_reduction(*loop.body, vars, op)) {
            rep.verdict = Verdict::ParallelWithReduction;
            rep.basis = Basis::Directive;
            rep.reduction_vars = red->scalars;
            return rep;
        }
    }

    if (auto fast = affine_fast_path(loop)) {
        rep.verdict = *fast;
        rep.basis = Basis::Affine;
        return rep;
    }

    if (witnesses) {
        rep.basis = Basis::Enumeration;
        if (witnesses->empty()) {
            rep.verdict = Verdict::Parallel;
        } else {
            rep.verdict = Verdict::Serial;
            rep.witnesses = std::move(*witnesses);
        }
        return rep;
    }

    rep.verdict = Verdict::Unknown;
    return rep;
}

DependenceReport analyze_while(const Stmt& loop) {
    DependenceReport rep;
    rep.loop_id = loop.loop_id;
    rep.loc = loop.loc;
    for (const auto& d : loop.directives) {
        if (d.kind == Directive::Kind::Independent) {
            rep.verdict = Verdict::AssumedParallel;
            rep.basis = Basis::Directive;
            return rep;
        }
    }
    rep.verdict = Verdict::Unknown;
    rep.note = "while-loop iteration count is not statically enumerable";
    return rep;
}

namespace {

void analyze_stmt(const Ast& ast, const ResolvedSummaries& resolved, const Stmt& s,
                  const ParamBinding* binding, long long budget,
                  std::vector<DependenceReport>& out) {
    if (s.kind == StmtKind::For) out.push_back(analyze_loop(ast, resolved, s, binding, budget));
    if (s.kind == StmtKind::While) out.push_back(analyze_while(s));
    for (const auto& c : s.stmts) analyze_stmt(ast, resolved, *c, binding, budget, out);
    if (s.body) analyze_stmt(ast, resolved, *s.body, binding, budget, out);
    if (s.then_branch) analyze_stmt(ast, resolved, *s.then_branch, binding, budget, out);
    if (s.else_branch) analyze_stmt(ast, resolved, *s.else_branch, binding, budget, out);
}

}  // namespace

std::vector<DependenceReport> analyze_unit(const Ast& ast, const ResolvedSummaries& resolved,
                                           const ParamBinding* binding, long long budget) {
    std::vector<DependenceReport> out;
    for (const auto& fn : ast.functions)
        if (fn.body) analyze_stmt(ast, resolved, *fn.body, binding, budget, out);
    return out;
}

}  // namespace pencil
