#include "pencil/summaries.hpp"

#include <optional>
#include <set>

#include "pencil/compliance.hpp"

namespace pencil {

// ---------------------------------------------------------------------------
// ACCESS resolution
// ---------------------------------------------------------------------------

ResolvedSummaries resolve_access_bindings(const Ast& ast) {
    ResolvedSummaries out;
    for (const auto& fn : ast.functions) {
        if (!fn.access) continue;
        const FunctionDef* callee = ast.find_function(fn.access->callee);
        if (!callee) {
            out.diagnostics.push_back({"E-SUMMARY-UNDEF", Severity::Error,
                                       "ACCESS names undefined function '" + fn.access->callee +
                                           "'",
                                       fn.access->loc, std::nullopt});
            continue;
        }
        if (callee->params.size() != fn.access->args.size()) {
            out.diagnostics.push_back(
                {"E-SUMMARY-ARITY", Severity::Error,
                 "ACCESS(" + fn.access->callee + ") passes " +
                     std::to_string(fn.access->args.size()) + " argument(s), summary expects " +
                     std::to_string(callee->params.size()),
                 fn.access->loc, std::nullopt});
            continue;
        }
        out.bindings[fn.name] = &*fn.access;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Access collection engine
// ---------------------------------------------------------------------------

namespace {

struct ArrayRef {
    std::string canonical;
    const std::vector<long long>* contents = nullptr;
    std::optional<long long> extent;  // leading dimension, for E-BOUNDS
    bool is_private = false;
};

struct Frame {
    std::map<std::string, std::optional<long long>> scalars;
    std::set<std::string> private_scalars;
    std::map<std::string, ArrayRef> arrays;
};

class Collector {
  public:
    enum class Mode { Summary, Tolerant };

    Collector(const Ast& ast, const ResolvedSummaries* resolved, const ParamBinding& binding,
              Mode mode, long long budget)
        : ast_(ast), resolved_(resolved), binding_(binding), mode_(mode), budget_(budget) {}

    AccessResult take_result() { return std::move(result_); }

    ArrayRef resolve_array(const std::string& name, const Frame& f) const {
        auto it = f.arrays.find(name);
        if (it != f.arrays.end()) return it->second;
        ArrayRef ref;
        ref.canonical = name;
        auto c = binding_.arrays.find(name);
        if (c != binding_.arrays.end()) ref.contents = &c->second;
        return ref;
    }

    void exec(const Stmt& s, Frame& f) {
        step();
        switch (s.kind) {
            case StmtKind::Block:
                for (const auto& c : s.stmts) exec(*c, f);
                break;
            case StmtKind::Decl: {
                f.private_scalars.insert(s.name);
                if (!s.decl_extents.empty()) {
                    ArrayRef ref;
                    ref.canonical = s.name;
                    ref.is_private = true;
                    f.arrays[s.name] = ref;
                    f.scalars.erase(s.name);
                } else {
                    f.scalars[s.name] = s.rhs ? eval_drive(*s.rhs, f) : std::nullopt;
                }
                break;
            }
            case StmtKind::Assign:
                exec_assign(s, f);
                break;
            case StmtKind::SummaryAccess:
                exec_summary_access(s, f);
                break;
            case StmtKind::For:
                exec_for(s, f);
                break;
            case StmtKind::While:
                exec_while(s, f);
                break;
            case StmtKind::If:
                exec_if(s, f);
                break;
            case StmtKind::CallStmt:
                handle_call(*s.call, f);
                break;
            case StmtKind::Return:
                if (s.rhs) eval(*s.rhs, f);
                returned_ = true;
                break;
            case StmtKind::Labeled: {
                std::string saved = label_;
                label_ = s.name;
                exec(*s.body, f);
                label_ = saved;
                break;
            }
            case StmtKind::Goto:
                // unreachable in compliant code; nothing to enumerate
                break;
        }
    }

    void exec_assign(const Stmt& s, Frame& f) {
        char op = 0;
        switch (s.assign_op) {
            case AssignOp::Set: break;
            case AssignOp::Add: op = '+'; break;
            case AssignOp::Sub: op = '-'; break;
            case AssignOp::Mul: op = '*'; break;
            case AssignOp::Div: op = '/'; break;
        }
        std::optional<long long> value = eval_drive(*s.rhs, f);
        const Expr& lv = *s.lvalue;
        if (lv.kind == ExprKind::Var) {
            bool is_private = f.private_scalars.count(lv.name) > 0;
            bool tracked = is_private || f.scalars.count(lv.name) > 0;
            if (!is_private && mode_ == Mode::Tolerant) {
                if (op != 0) emit(lv.name, {}, AccessKind::Read, false, op);
                emit_write(lv.name, {}, false, op);
            }
            if (tracked) {
                auto& slot = f.scalars[lv.name];
                if (op == 0) slot = value;
                else if (slot && value) slot = apply_op(op, *slot, *value);
                else slot = std::nullopt;
            }
            return;
        }
        if (lv.kind == ExprKind::Index ||
            (lv.kind == ExprKind::Unary && lv.un_op == UnOp::Deref)) {
            if (mode_ == Mode::Summary) return;
            auto [array, index, unknown, in_range] = eval_lvalue(lv, f);
            if (array.empty()) return;  // private local array
            if (op != 0) emit(array, index, AccessKind::Read, unknown, op);
            if (in_range) emit_write(array, index, unknown, op);
            return;
        }
        // any other lvalue shape was already rejected by the parser
    }

    void exec_summary_access(const Stmt& s, Frame& f) {
        const Expr& lv = *s.lvalue;
        std::string array;
        std::vector<long long> index;
        bool in_range = true;
        if (lv.kind == ExprKind::Var) {
            array = resolve_array(lv.name, f).canonical;
        } else {
            ArrayRef ref = resolve_array(lv.name, f);
            array = ref.canonical;
            for (const auto& sub : lv.args) {
                auto v = eval(*sub, f, /*emit_reads=*/false);
                if (!v) {
                    if (mode_ == Mode::Summary)
                        throw PencilError("E-NONAFFINE",
                                          "summary access index is not evaluable", lv.loc);
                    emit(array, {}, summary_target_kind(s.summary_kind), true, 0);
                    return;
                }
                index.push_back(*v);
            }
            in_range = check_bounds(ref, index, lv.loc);
        }
        switch (s.summary_kind) {
            case SummaryKind::Def:
                if (!in_range) break;
                emit(array, index, AccessKind::MustWrite, false, 0);
                emit(array, index, AccessKind::MayWrite, false, 0);
                break;
            case SummaryKind::Use:
                emit(array, index, AccessKind::Read, false, 0);
                break;
            case SummaryKind::MayDef:
                if (!in_range) break;
                emit(array, index, AccessKind::MayWrite, false, 0);
                break;
        }
    }

    static AccessKind summary_target_kind(SummaryKind k) {
        return k == SummaryKind::Use ? AccessKind::Read : AccessKind::MayWrite;
    }

    void exec_for(const Stmt& s, Frame& f) {
        auto lo = eval(*s.lo, f);
        auto hi = eval(*s.hi, f);
        if (!lo || !hi) {
            require_tolerant("loop bound is not evaluable", s.loc);
            one_demoted_pass(s, f);
            return;
        }
        bool was_private = f.private_scalars.count(s.name) > 0;
        f.private_scalars.insert(s.name);
        for (long long v = *lo; v < *hi; ++v) {
            step();
            f.scalars[s.name] = v;
            iter_.push_back(v);
            exec(*s.body, f);
            iter_.pop_back();
            if (returned_) break;
        }
        f.scalars.erase(s.name);
        if (!was_private) f.private_scalars.erase(s.name);
    }

    void exec_while(const Stmt& s, Frame& f) {
        long long round = 0;
        while (true) {
            auto c = eval(*s.cond, f);
            if (!c) {
                require_tolerant("while condition is not evaluable", s.loc);
                one_demoted_pass(s, f);
                return;
            }
            if (*c == 0) break;
            step();
            iter_.push_back(round++);
            exec(*s.body, f);
            iter_.pop_back();
            if (returned_) break;
        }
    }

    void exec_if(const Stmt& s, Frame& f) {
        auto c = eval(*s.cond, f);
        if (!c) {
            require_tolerant("branch condition is not evaluable", s.loc);
            bool saved = demote_;
            demote_ = true;
            if (s.then_branch) exec(*s.then_branch, f);
            if (s.else_branch) exec(*s.else_branch, f);
            demote_ = saved;
            return;
        }
        if (*c != 0) {
            if (s.then_branch) exec(*s.then_branch, f);
        } else if (s.else_branch) {
            exec(*s.else_branch, f);
        }
    }

    void one_demoted_pass(const Stmt& loop, Frame& f) {
        bool saved = demote_;
        demote_ = true;
        if (loop.kind == StmtKind::For) {
            bool was_private = f.private_scalars.count(loop.name) > 0;
            f.private_scalars.insert(loop.name);
            f.scalars[loop.name] = std::nullopt;
            exec(*loop.body, f);
            f.scalars.erase(loop.name);
            if (!was_private) f.private_scalars.erase(loop.name);
        } else {
            exec(*loop.body, f);
        }
        demote_ = saved;
    }

    static std::optional<long long> apply_op(char op, long long a, long long b) {
        switch (op) {
            case '+': return a + b;
            case '-': return a - b;
            case '*': return a * b;
            case '/': return b == 0 ? std::nullopt : std::optional<long long>(a / b);
        }
        return std::nullopt;
    }

    // Evaluation for value-tracking sites (assignments, initializers): a
    // summary may compute values it never uses for control, so only a
    // later use of an unknown value is an error there.
    std::optional<long long> eval_drive(const Expr& e, Frame& f) {
        if (mode_ == Mode::Summary) {
            try {
                return eval(e, f, false);
            } catch (const PencilError& err) {
                if (err.code() != "E-NONAFFINE") throw;
                return std::nullopt;
            }
        }
        return eval(e, f);
    }

    // Evaluates and, in tolerant mode, emits Read records for every memory
    // access the expression performs.
    std::optional<long long> eval(const Expr& e, Frame& f, bool emit_reads = true) {
        switch (e.kind) {
            case ExprKind::IntLit:
                return e.int_val;
            case ExprKind::FloatLit:
                return std::nullopt;  // float values never feed indices
            case ExprKind::Var: {
                if (f.arrays.count(e.name) || binding_.arrays.count(e.name))
                    return std::nullopt;  // bare array name
                auto it = f.scalars.find(e.name);
                bool is_private = f.private_scalars.count(e.name) > 0;
                std::optional<long long> value =
                    it != f.scalars.end() ? it->second : std::nullopt;
                if (!is_private) {
                    if (mode_ == Mode::Summary) {
                        if (!value)
                            throw PencilError("E-NONAFFINE",
                                              "unbound value '" + e.name + "' in summary", e.loc);
                    } else if (emit_reads && !value) {
                        // bound scalars are interpretation inputs, not
                        // memory; only value-unknown scalars are accesses
                        emit(e.name, {}, AccessKind::Read, false, 0);
                    }
                }
                return value;
            }
            case ExprKind::Index: {
                if (mode_ == Mode::Summary)
                    throw PencilError("E-NONAFFINE",
                                      "summary control or index reads array contents", e.loc);
                ArrayRef ref = resolve_array(e.name, f);
                std::vector<long long> index;
                bool unknown = false;
                for (const auto& sub : e.args) {
                    auto v = eval(*sub, f, emit_reads);
                    if (!v) unknown = true;
                    else index.push_back(*v);
                }
                if (ref.is_private) return std::nullopt;
                if (emit_reads) {
                    if (unknown) emit(ref.canonical, {}, AccessKind::Read, true, 0);
                    else emit(ref.canonical, index, AccessKind::Read, false, 0);
                }
                if (!unknown && ref.contents && e.args.size() == 1) {
                    check_bounds(ref, index, e.loc);
                    if (index[0] >= 0 && index[0] < (long long)ref.contents->size())
                        return (*ref.contents)[index[0]];
                }
                return std::nullopt;
            }
            case ExprKind::Binary: {
                auto a = eval(*e.args[0], f, emit_reads);
                auto b = eval(*e.args[1], f, emit_reads);
                if (!a || !b) return std::nullopt;
                return fold_binary(e.bin_op, *a, *b);
            }
            case ExprKind::Unary: {
                if (e.un_op == UnOp::Deref) {
                    // *p on a scalar out-parameter reads its (sole) cell
                    if (mode_ == Mode::Summary)
                        throw PencilError("E-NONAFFINE", "pointer dereference in summary", e.loc);
                    if (e.args[0]->kind == ExprKind::Var && emit_reads)
                        emit(e.args[0]->name, {0}, AccessKind::Read, false, 0);
                    return std::nullopt;
                }
                auto a = eval(*e.args[0], f, emit_reads);
                if (!a) return std::nullopt;
                return e.un_op == UnOp::Neg ? -*a : (*a == 0 ? 1 : 0);
            }
            case ExprKind::Call:
                handle_call(e, f);
                return std::nullopt;  // call results never feed affine indices
        }
        return std::nullopt;
    }

    static std::optional<long long> fold_binary(BinOp op, long long a, long long b) {
        switch (op) {
            case BinOp::Add: return a + b;
            case BinOp::Sub: return a - b;
            case BinOp::Mul: return a * b;
            case BinOp::Div: return b == 0 ? std::nullopt : std::optional<long long>(a / b);
            case BinOp::Mod: return b == 0 ? std::nullopt : std::optional<long long>(a % b);
            case BinOp::Lt: return a < b ? 1 : 0;
            case BinOp::Le: return a <= b ? 1 : 0;
            case BinOp::Gt: return a > b ? 1 : 0;
            case BinOp::Ge: return a >= b ? 1 : 0;
            case BinOp::Eq: return a == b ? 1 : 0;
            case BinOp::Ne: return a != b ? 1 : 0;
            case BinOp::LogAnd: return (a != 0 && b != 0) ? 1 : 0;
            case BinOp::LogOr: return (a != 0 || b != 0) ? 1 : 0;
        }
        return std::nullopt;
    }

    // lvalue -> (canonical array, index, unknown?, in range?);
    // empty array = private
    std::tuple<std::string, std::vector<long long>, bool, bool> eval_lvalue(const Expr& lv,
                                                                            Frame& f) {
        if (lv.kind == ExprKind::Unary && lv.un_op == UnOp::Deref) {
            if (lv.args[0]->kind == ExprKind::Var) return {lv.args[0]->name, {0}, false, true};
            return {"", {}, false, true};
        }
        ArrayRef ref = resolve_array(lv.name, f);
        std::vector<long long> index;
        bool unknown = false;
        for (const auto& sub : lv.args) {
            auto v = eval(*sub, f);
            if (!v) unknown = true;
            else index.push_back(*v);
        }
        if (ref.is_private) return {"", {}, false, true};
        bool in_range = unknown || check_bounds(ref, index, lv.loc);
        if (unknown) index.clear();
        return {ref.canonical, index, unknown, in_range};
    }

    void handle_call(const Expr& call, Frame& f) {
        if (mode_ == Mode::Summary) {
            if (ast_.find_function(call.name))
                throw PencilError("E-NESTED-SUMMARY",
                                  "summary function calls '" + call.name + "'", call.loc);
            throw PencilError("E-NONAFFINE", "call to '" + call.name + "' inside a summary",
                              call.loc);
        }
        if (++call_depth_ > 64)
            throw PencilError("E-BUDGET", "call depth limit exceeded", call.loc);
        struct DepthGuard {
            int& d;
            ~DepthGuard() { --d; }
        } guard{call_depth_};

        const FunctionDef* callee = ast_.find_function(call.name);
        if (!callee) {
            if (is_whitelisted_external(call.name)) {
                for (const auto& a : call.args) eval(*a, f);  // arguments are still read
                return;
            }
            throw PencilError("E-NO-SUMMARY",
                              "no summary or body for called function '" + call.name + "'",
                              call.loc);
        }
        if (in_summary_body_)
            throw PencilError("E-NESTED-SUMMARY",
                              "summary function calls summarized function '" + call.name + "'",
                              call.loc);
        if (callee->params.size() != call.args.size())
            throw PencilError("E-SUMMARY-ARITY",
                              "call to '" + call.name + "' with wrong argument count", call.loc);

        Frame inner = bind_arguments(*callee, call.args, f);
        const AccessBinding* binding = resolved_ ? resolved_->find(call.name) : nullptr;
        if (binding) {
            const FunctionDef* summary = ast_.find_function(binding->callee);
            if (!summary || summary->params.size() != binding->args.size())
                throw PencilError("E-NO-SUMMARY",
                                  "unresolvable ACCESS binding on '" + call.name + "'", call.loc);
            Frame sframe = bind_arguments(*summary, binding->args, inner);
            bool saved = in_summary_body_;
            in_summary_body_ = true;
            exec(*summary->body, sframe);
            in_summary_body_ = saved;
            return;
        }
        if (!callee->body)
            throw PencilError("E-NO-SUMMARY",
                              "function '" + call.name + "' has neither body nor summary",
                              call.loc);
        bool saved = returned_;
        returned_ = false;
        exec(*callee->body, inner);
        returned_ = saved;
    }

    Frame bind_arguments(const FunctionDef& callee, const std::vector<ExprPtr>& args,
                         Frame& caller) {
        Frame inner;
        for (size_t i = 0; i < callee.params.size(); ++i) {
            const Param& p = callee.params[i];
            const Expr& a = *args[i];
            if (p.kind == ParamKind::Array || p.kind == ParamKind::PointerArray) {
                if (a.kind != ExprKind::Var)
                    throw PencilError("E-NO-SUMMARY",
                                      "array argument for '" + p.name + "' must be a named array",
                                      a.loc);
                inner.arrays[p.name] = resolve_array(a.name, caller);
            } else {
                inner.scalars[p.name] = eval(a, caller);
            }
        }
        // evaluate declared leading extents now that scalars are in place
        for (const auto& p : callee.params) {
            if (p.kind != ParamKind::Array || p.extents.empty()) continue;
            auto& ref = inner.arrays[p.name];
            if (!ref.extent) {
                try {
                    ref.extent = eval(*p.extents[0], inner, false);
                } catch (const PencilError&) {
                    ref.extent = std::nullopt;
                }
            }
        }
        return inner;
    }

    // Returns false when the index provably falls outside the declared
    // extent. Out-of-range reads are still recorded; out-of-range writes
    // are dropped (the warning is the only trace), since a write outside
    // the array is not a write of the array.
    bool check_bounds(const ArrayRef& ref, const std::vector<long long>& index, SourceLoc loc) {
        if (!ref.extent || index.empty()) return true;
        if (index[0] < 0 || index[0] >= *ref.extent) {
            std::string cell = ref.canonical + "[" + std::to_string(index[0]) + "]";
            if (bounds_reported_.insert(cell).second)
                result_.warnings.push_back({"E-BOUNDS", Severity::Warning,
                                            "access to " + cell + " is outside the declared extent " +
                                                std::to_string(*ref.extent),
                                            loc, std::nullopt});
            return false;
        }
        return true;
    }

    void emit_write(const std::string& array, const std::vector<long long>& index, bool unknown,
                    char op) {
        if (demote_ || unknown) {
            emit(array, index, AccessKind::MayWrite, unknown, op);
        } else {
            emit(array, index, AccessKind::MustWrite, false, op);
            emit(array, index, AccessKind::MayWrite, false, op);
        }
    }

    void emit(const std::string& array, std::vector<long long> index, AccessKind kind,
              bool unknown, char op) {
        if (++emitted_ > budget_)
            throw PencilError("E-BUDGET", "access enumeration budget exceeded");
        AccessRecord rec;
        rec.array = array;
        rec.index = std::move(index);
        rec.kind = kind;
        rec.iter = iter_;
        rec.unknown_index = unknown;
        rec.compound_op = op;
        rec.stmt_label = label_;
        result_.triple.insert(std::move(rec));
    }

    void step() {
        if (++steps_ > budget_ * 8)
            throw PencilError("E-BUDGET", "interpretation step budget exceeded");
    }

    void require_tolerant(const std::string& why, SourceLoc loc) const {
        if (mode_ == Mode::Summary) throw PencilError("E-NONAFFINE", why, loc);
    }

    const Ast& ast_;
    const ResolvedSummaries* resolved_;
    const ParamBinding& binding_;
    Mode mode_;
    long long budget_;
    long long emitted_ = 0;
    long long steps_ = 0;
    int call_depth_ = 0;
    bool demote_ = false;
    bool returned_ = false;
    bool in_summary_body_ = false;
    std::string label_;
    std::vector<long long> iter_;
    std::set<std::string> bounds_reported_;
    AccessResult result_;
};

Frame frame_for_function(const FunctionDef& fn, const ParamBinding& binding, bool require_scalars) {
    Frame f;
    for (const auto& p : fn.params) {
        if (p.kind == ParamKind::Scalar) {
            auto it = binding.scalars.find(p.name);
            if (it == binding.scalars.end()) {
                if (require_scalars)
                    throw PencilError("E-NONAFFINE",
                                      "scalar parameter '" + p.name + "' is not bound", p.loc);
                f.scalars[p.name] = std::nullopt;
            } else {
                f.scalars[p.name] = it->second;
            }
        } else if (p.kind == ParamKind::Array || p.kind == ParamKind::PointerArray) {
            ArrayRef ref;
            ref.canonical = p.name;
            auto c = binding.arrays.find(p.name);
            if (c != binding.arrays.end()) ref.contents = &c->second;
            f.arrays[p.name] = ref;
        }
    }
    return f;
}

void fill_extents(const FunctionDef& fn, Frame& f, const Ast& ast, const ParamBinding& binding) {
    Collector probe(ast, nullptr, binding, Collector::Mode::Tolerant, kDefaultBudget);
    for (const auto& p : fn.params) {
        if (p.kind != ParamKind::Array || p.extents.empty()) continue;
        try {
            f.arrays[p.name].extent = probe.eval(*p.extents[0], f, false);
        } catch (const PencilError&) {
        }
    }
}

}  // namespace

AccessResult interpret_summary(const Ast& ast, const FunctionDef& summary,
                               const ParamBinding& binding, long long budget) {
    Frame f = frame_for_function(summary, binding, /*require_scalars=*/true);
    fill_extents(summary, f, ast, binding);
    Collector c(ast, nullptr, binding, Collector::Mode::Summary, budget);
    c.exec(*summary.body, f);
    return c.take_result();
}

AccessResult summarize_call(const Ast& ast, const ResolvedSummaries& resolved,
                            const std::string& callee, const std::vector<ExprPtr>& args,
                            const ParamBinding& caller_binding, long long budget) {
    Collector c(ast, &resolved, caller_binding, Collector::Mode::Tolerant, budget);
    ExprPtr call = make_call(callee, {});
    for (const auto& a : args) call->args.push_back(a->clone());
    Stmt stmt;
    stmt.kind = StmtKind::CallStmt;
    stmt.call = std::move(call);
    Frame caller;
    for (const auto& [name, value] : caller_binding.scalars) caller.scalars[name] = value;
    c.exec(stmt, caller);
    return c.take_result();
}

AccessResult collect_accesses(const Ast& ast, const ResolvedSummaries& resolved, const Stmt& stmt,
                              const ParamBinding& binding,
                              const std::map<std::string, long long>& extra_scalars,
                              long long budget) {
    Collector c(ast, &resolved, binding, Collector::Mode::Tolerant, budget);
    Frame f;
    for (const auto& [name, value] : binding.scalars) f.scalars[name] = value;
    for (const auto& [name, value] : extra_scalars) {
        f.scalars[name] = value;
        f.private_scalars.insert(name);
    }
    c.exec(stmt, f);
    return c.take_result();
}

}  // namespace pencil
