#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pencil/diag.hpp"

namespace pencil {

enum class Type { Void, Int, Float, Double };

std::string type_name(Type t);

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class BinOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, LogAnd, LogOr };
enum class UnOp { Neg, LogNot, AddrOf, Deref };

enum class ExprKind { IntLit, FloatLit, Var, Index, Binary, Unary, Call };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    ExprKind kind = ExprKind::IntLit;
    SourceLoc loc;

    long long int_val = 0;    // IntLit
    double float_val = 0.0;   // FloatLit
    std::string name;         // Var, Call callee, Index base array
    BinOp bin_op{};           // Binary: args[0] op args[1]
    UnOp un_op{};             // Unary: op args[0]
    std::vector<ExprPtr> args;  // Call args / Index subscripts / operands

    ExprPtr clone() const;
};

ExprPtr make_int(long long v, SourceLoc loc = {});
ExprPtr make_var(const std::string& name, SourceLoc loc = {});
ExprPtr make_index(const std::string& array, std::vector<ExprPtr> subs, SourceLoc loc = {});
ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc = {});
ExprPtr make_call(const std::string& callee, std::vector<ExprPtr> args, SourceLoc loc = {});

// ---------------------------------------------------------------------------
// Directives
// ---------------------------------------------------------------------------

struct Directive {
    enum class Kind { Independent, Reduction };

    Kind kind = Kind::Independent;
    std::vector<std::string> labels;    // Independent: possibly empty
    std::string reduction_op;           // "+", "*", "max", "min"
    std::vector<std::string> scalars;   // Reduction targets
    SourceLoc loc;
};

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

enum class StmtKind {
    Block,
    Decl,
    Assign,
    For,
    While,
    If,
    CallStmt,
    Return,
    Labeled,
    Goto,
    SummaryAccess,
};

enum class AssignOp { Set, Add, Sub, Mul, Div };

enum class SummaryKind { Def, Use, MayDef };

std::string summary_spelling(SummaryKind k);

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
    StmtKind kind = StmtKind::Block;
    SourceLoc loc;

    std::vector<StmtPtr> stmts;  // Block

    // Decl
    Type decl_type = Type::Int;
    bool decl_is_pointer = false;
    std::vector<ExprPtr> decl_extents;  // fixed-size local arrays

    std::string name;  // Decl / For loop var / Labeled label / Goto target

    // Assign
    ExprPtr lvalue;
    AssignOp assign_op = AssignOp::Set;
    ExprPtr rhs;  // Assign rhs / Decl initializer / Return value

    // For: normalized to `name = lo; name < hi; name++`
    bool loop_var_decl = false;  // `for (int i = ...)` spelling
    ExprPtr lo;
    ExprPtr hi;
    StmtPtr body;  // For / While / Labeled inner

    // While / If
    ExprPtr cond;
    StmtPtr then_branch;
    StmtPtr else_branch;

    ExprPtr call;  // CallStmt

    SummaryKind summary_kind = SummaryKind::Def;  // SummaryAccess; lvalue holds target

    std::vector<Directive> directives;          // attached (loops only)
    std::vector<Directive> pending_directives;  // parsed, pre-attachment
    int loop_id = -1;                           // assigned by assign_loop_ids

    StmtPtr clone() const;
};

// ---------------------------------------------------------------------------
// Functions and translation units
// ---------------------------------------------------------------------------

enum class ParamKind {
    Scalar,
    Array,          // C99 VLA syntax
    ScalarPointer,  // `T * const restrict p`
    PointerArray,   // array of pointers (never compliant; kept for diagnosis)
};

struct Param {
    std::string name;
    ParamKind kind = ParamKind::Scalar;
    Type elem = Type::Int;
    std::vector<ExprPtr> extents;  // Array: one expr per dimension
    bool has_restrict = false;
    bool has_const = false;
    bool has_static = false;
    SourceLoc loc;

    Param clone() const;
};

struct AccessBinding {
    std::string callee;
    std::vector<ExprPtr> args;
    SourceLoc loc;
};

struct FunctionDef {
    std::string name;
    Type ret = Type::Void;
    std::vector<Param> params;
    StmtPtr body;
    std::optional<AccessBinding> access;
    SourceLoc loc;

    FunctionDef clone() const;
    const Param* find_param(const std::string& pname) const;
};

struct Ast {
    std::vector<FunctionDef> functions;

    Ast clone() const;
    const FunctionDef* find_function(const std::string& fname) const;
};

/// Gives every for/while loop a stable id (preorder over functions).
/// Returns the number of loops.
int assign_loop_ids(Ast& ast);

/// Structural equality, ignoring locations, loop ids and pending state.
bool structurally_equal(const Ast& a, const Ast& b);
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Stmt& a, const Stmt& b);

}  // namespace pencil
