#include "pencil/ast.hpp"

namespace pencil {

std::string type_name(Type t) {
    switch (t) {
        case Type::Void: return "void";
        case Type::Int: return "int";
        case Type::Float: return "float";
        case Type::Double: return "double";
    }
    return "?";
}

std::string summary_spelling(SummaryKind k) {
    switch (k) {
        case SummaryKind::Def: return "DEF";
        case SummaryKind::Use: return "USE";
        case SummaryKind::MayDef: return "MAY_DEF";
    }
    return "?";
}

ExprPtr make_int(long long v, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::IntLit;
    e->int_val = v;
    e->loc = loc;
    return e;
}

ExprPtr make_var(const std::string& name, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Var;
    e->name = name;
    e->loc = loc;
    return e;
}

ExprPtr make_index(const std::string& array, std::vector<ExprPtr> subs, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Index;
    e->name = array;
    e->args = std::move(subs);
    e->loc = loc;
    return e;
}

ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Binary;
    e->bin_op = op;
    e->args.push_back(std::move(lhs));
    e->args.push_back(std::move(rhs));
    e->loc = loc;
    return e;
}

ExprPtr make_call(const std::string& callee, std::vector<ExprPtr> args, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Call;
    e->name = callee;
    e->args = std::move(args);
    e->loc = loc;
    return e;
}

ExprPtr Expr::clone() const {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->loc = loc;
    e->int_val = int_val;
    e->float_val = float_val;
    e->name = name;
    e->bin_op = bin_op;
    e->un_op = un_op;
    for (const auto& a : args) e->args.push_back(a->clone());
    return e;
}

static ExprPtr clone_opt(const ExprPtr& e) { return e ? e->clone() : nullptr; }
static StmtPtr clone_opt(const StmtPtr& s) { return s ? s->clone() : nullptr; }

StmtPtr Stmt::clone() const {
    auto s = std::make_unique<Stmt>();
    s->kind = kind;
    s->loc = loc;
    for (const auto& c : stmts) s->stmts.push_back(c->clone());
    s->decl_type = decl_type;
    s->decl_is_pointer = decl_is_pointer;
    for (const auto& e : decl_extents) s->decl_extents.push_back(e->clone());
    s->name = name;
    s->lvalue = clone_opt(lvalue);
    s->assign_op = assign_op;
    s->rhs = clone_opt(rhs);
    s->loop_var_decl = loop_var_decl;
    s->lo = clone_opt(lo);
    s->hi = clone_opt(hi);
    s->body = clone_opt(body);
    s->cond = clone_opt(cond);
    s->then_branch = clone_opt(then_branch);
    s->else_branch = clone_opt(else_branch);
    s->call = clone_opt(call);
    s->summary_kind = summary_kind;
    s->directives = directives;
    s->pending_directives = pending_directives;
    s->loop_id = loop_id;
    return s;
}

Param Param::clone() const {
    Param p;
    p.name = name;
    p.kind = kind;
    p.elem = elem;
    for (const auto& e : extents) p.extents.push_back(e->clone());
    p.has_restrict = has_restrict;
    p.has_const = has_const;
    p.has_static = has_static;
    p.loc = loc;
    return p;
}

FunctionDef FunctionDef::clone() const {
    FunctionDef f;
    f.name = name;
    f.ret = ret;
    for (const auto& p : params) f.params.push_back(p.clone());
    f.body = body ? body->clone() : nullptr;
    if (access) {
        AccessBinding b;
        b.callee = access->callee;
        b.loc = access->loc;
        for (const auto& a : access->args) b.args.push_back(a->clone());
        f.access = std::move(b);
    }
    f.loc = loc;
    return f;
}

const Param* FunctionDef::find_param(const std::string& pname) const {
    for (const auto& p : params)
        if (p.name == pname) return &p;
    return nullptr;
}

Ast Ast::clone() const {
    Ast a;
    for (const auto& f : functions) a.functions.push_back(f.clone());
    return a;
}

const FunctionDef* Ast::find_function(const std::string& fname) const {
    for (const auto& f : functions)
        if (f.name == fname) return &f;
    return nullptr;
}

static void assign_ids_stmt(Stmt& s, int& next) {
    if (s.kind == StmtKind::For || s.kind == StmtKind::While) s.loop_id = next++;
    for (auto& c : s.stmts) assign_ids_stmt(*c, next);
    if (s.body) assign_ids_stmt(*s.body, next);
    if (s.then_branch) assign_ids_stmt(*s.then_branch, next);
    if (s.else_branch) assign_ids_stmt(*s.else_branch, next);
}

int assign_loop_ids(Ast& ast) {
    int next = 0;
    for (auto& f : ast.functions)
        if (f.body) assign_ids_stmt(*f.body, next);
    return next;
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::IntLit:
            if (a.int_val != b.int_val) return false;
            break;
        case ExprKind::FloatLit:
            if (a.float_val != b.float_val) return false;
            break;
        case ExprKind::Var:
        case ExprKind::Index:
        case ExprKind::Call:
            if (a.name != b.name) return false;
            break;
        case ExprKind::Binary:
            if (a.bin_op != b.bin_op) return false;
            break;
        case ExprKind::Unary:
            if (a.un_op != b.un_op) return false;
            break;
    }
    if (a.args.size() != b.args.size()) return false;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (!structurally_equal(*a.args[i], *b.args[i])) return false;
    return true;
}

static bool eq_opt(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return structurally_equal(*a, *b);
}

static bool eq_opt(const StmtPtr& a, const StmtPtr& b) {
    if (!a || !b) return !a && !b;
    return structurally_equal(*a, *b);
}

static bool directives_equal(const std::vector<Directive>& a, const std::vector<Directive>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].kind != b[i].kind || a[i].labels != b[i].labels ||
            a[i].reduction_op != b[i].reduction_op || a[i].scalars != b[i].scalars)
            return false;
    }
    return true;
}

bool structurally_equal(const Stmt& a, const Stmt& b) {
    if (a.kind != b.kind || a.name != b.name) return false;
    if (a.stmts.size() != b.stmts.size()) return false;
    for (size_t i = 0; i < a.stmts.size(); ++i)
        if (!structurally_equal(*a.stmts[i], *b.stmts[i])) return false;
    if (a.decl_type != b.decl_type || a.decl_is_pointer != b.decl_is_pointer) return false;
    if (a.decl_extents.size() != b.decl_extents.size()) return false;
    for (size_t i = 0; i < a.decl_extents.size(); ++i)
        if (!structurally_equal(*a.decl_extents[i], *b.decl_extents[i])) return false;
    if (a.assign_op != b.assign_op || a.summary_kind != b.summary_kind) return false;
    if (!eq_opt(a.lvalue, b.lvalue) || !eq_opt(a.rhs, b.rhs)) return false;
    if (!eq_opt(a.lo, b.lo) || !eq_opt(a.hi, b.hi)) return false;
    if (!eq_opt(a.cond, b.cond) || !eq_opt(a.call, b.call)) return false;
    if (!eq_opt(a.body, b.body)) return false;
    if (!eq_opt(a.then_branch, b.then_branch) || !eq_opt(a.else_branch, b.else_branch))
        return false;
    if (!directives_equal(a.directives, b.directives)) return false;
    return true;
}

static bool params_equal(const Param& a, const Param& b) {
    if (a.name != b.name || a.kind != b.kind || a.elem != b.elem) return false;
    if (a.has_restrict != b.has_restrict || a.has_const != b.has_const ||
        a.has_static != b.has_static)
        return false;
    if (a.extents.size() != b.extents.size()) return false;
    for (size_t i = 0; i < a.extents.size(); ++i)
        if (!structurally_equal(*a.extents[i], *b.extents[i])) return false;
    return true;
}

bool structurally_equal(const Ast& a, const Ast& b) {
    if (a.functions.size() != b.functions.size()) return false;
    for (size_t i = 0; i < a.functions.size(); ++i) {
        const auto& fa = a.functions[i];
        const auto& fb = b.functions[i];
        if (fa.name != fb.name || fa.ret != fb.ret) return false;
        if (fa.params.size() != fb.params.size()) return false;
        for (size_t j = 0; j < fa.params.size(); ++j)
            if (!params_equal(fa.params[j], fb.params[j])) return false;
        if (fa.access.has_value() != fb.access.has_value()) return false;
        if (fa.access) {
            if (fa.access->callee != fb.access->callee) return false;
            if (fa.access->args.size() != fb.access->args.size()) return false;
            for (size_t j = 0; j < fa.access->args.size(); ++j)
                if (!structurally_equal(*fa.access->args[j], *fb.access->args[j])) return false;
        }
        if (!eq_opt(fa.body, fb.body)) return false;
    }
    return true;
}

}  // namespace pencil
