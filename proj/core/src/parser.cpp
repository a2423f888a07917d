#include "pencil/parser.hpp"

#include <set>

namespace pencil {

namespace {

// Internal unwind for statement-level recovery.
struct SyntaxError {
    Diagnostic diag;
};

[[noreturn]] void fail(const std::string& message, SourceLoc loc) {
    throw SyntaxError{{"E-SYNTAX", Severity::Error, message, loc, std::nullopt}};
}

class Parser {
  public:
    explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

    ParseResult run() {
        Ast ast;
        while (!at(TokenKind::Eof)) {
            if (at(TokenKind::PragmaLine)) {
                diag("E-ATTACH", "pragma directive is not followed by a statement", peek().loc);
                advance();
                continue;
            }
            try {
                ast.functions.push_back(parse_function());
            } catch (const SyntaxError& e) {
                diags_.push_back(e.diag);
                recover_top_level();
            }
        }
        check_unit_invariants(ast);
        ParseResult result;
        result.diagnostics = std::move(diags_);
        if (!has_errors(result.diagnostics)) result.ast = std::move(ast);
        return result;
    }

  private:
    // -- token plumbing ----------------------------------------------------

    const Token& peek(size_t off = 0) const {
        size_t i = pos_ + off;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(TokenKind k) const { return peek().kind == k; }
    bool at_punct(const std::string& p) const {
        return peek().kind == TokenKind::Punctuator && peek().text == p;
    }
    bool at_keyword(const std::string& k) const {
        return peek().kind == TokenKind::Keyword && peek().text == k;
    }
    const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    const Token& expect_punct(const std::string& p) {
        if (!at_punct(p)) fail("expected '" + p + "' but found '" + peek().text + "'", peek().loc);
        return advance();
    }
    std::string expect_identifier(const std::string& what) {
        if (!at(TokenKind::Identifier)) fail("expected " + what, peek().loc);
        return advance().text;
    }

    void diag(const std::string& code, const std::string& message, SourceLoc loc,
              Severity sev = Severity::Error) {
        diags_.push_back({code, sev, message, loc, std::nullopt});
    }

    void recover_top_level() {
        int depth = 0;
        while (!at(TokenKind::Eof)) {
            if (at_punct("{")) ++depth;
            if (at_punct("}")) {
                advance();
                if (--depth <= 0) return;
                continue;
            }
            advance();
        }
    }

    void recover_statement() {
        int depth = 0;
        while (!at(TokenKind::Eof)) {
            if (at_punct(";") && depth == 0) {
                advance();
                return;
            }
            if (at_punct("{")) ++depth;
            if (at_punct("}")) {
                if (depth == 0) return;
                --depth;
            }
            advance();
        }
    }

    // -- declarations ------------------------------------------------------

    Type parse_type() {
        for (Type t : {Type::Void, Type::Int, Type::Float, Type::Double}) {
            if (at_keyword(type_name(t))) {
                advance();
                return t;
            }
        }
        fail("expected a type name", peek().loc);
    }

    FunctionDef parse_function() {
        FunctionDef fn;
        fn.loc = peek().loc;
        fn.ret = parse_type();
        fn.name = expect_identifier("function name");
        expect_punct("(");
        if (at_keyword("void") && peek(1).kind == TokenKind::Punctuator && peek(1).text == ")") {
            advance();
        } else if (!at_punct(")")) {
            fn.params.push_back(parse_param());
            while (at_punct(",")) {
                advance();
                fn.params.push_back(parse_param());
            }
        }
        expect_punct(")");
        if (at(TokenKind::Identifier) && peek().text == "ACCESS") fn.access = parse_access();
        fn.body = parse_block();
        return fn;
    }

    AccessBinding parse_access() {
        AccessBinding b;
        b.loc = peek().loc;
        advance();  // ACCESS
        expect_punct("(");
        b.callee = expect_identifier("summary function name");
        expect_punct("(");
        if (!at_punct(")")) {
            b.args.push_back(parse_expr());
            while (at_punct(",")) {
                advance();
                b.args.push_back(parse_expr());
            }
        }
        expect_punct(")");
        expect_punct(")");
        return b;
    }

    Param parse_param() {
        Param p;
        p.loc = peek().loc;
        p.elem = parse_type();
        bool pointer = false;
        if (at_punct("*")) {
            advance();
            pointer = true;
            // qualifier order after `*` is free in C
            while (at_keyword("const") || at_keyword("restrict")) {
                if (peek().text == "const") p.has_const = true;
                else p.has_restrict = true;
                advance();
            }
        }
        bool parenthesized = false;
        if (at_punct("(")) {  // `int *(d[4])`
            advance();
            parenthesized = true;
        }
        p.name = expect_identifier("parameter name");
        if (at_punct("[")) {
            p.kind = pointer ? ParamKind::PointerArray : ParamKind::Array;
            while (at_punct("[")) {
                advance();
                if (p.extents.empty() && !pointer) {
                    // leading dimension may carry the C99 qualifier triple
                    while (at_keyword("restrict") || at_keyword("const") || at_keyword("static")) {
                        if (peek().text == "restrict") p.has_restrict = true;
                        else if (peek().text == "const") p.has_const = true;
                        else p.has_static = true;
                        advance();
                    }
                }
                p.extents.push_back(parse_expr());
                expect_punct("]");
            }
        } else {
            p.kind = pointer ? ParamKind::ScalarPointer : ParamKind::Scalar;
        }
        if (parenthesized) expect_punct(")");
        return p;
    }

    // -- statements --------------------------------------------------------

    StmtPtr parse_block() {
        auto block = std::make_unique<Stmt>();
        block->kind = StmtKind::Block;
        block->loc = peek().loc;
        expect_punct("{");
        while (!at_punct("}")) {
            if (at(TokenKind::Eof)) fail("unexpected end of input in block", peek().loc);
            try {
                block->stmts.push_back(parse_statement());
            } catch (const SyntaxError& e) {
                diags_.push_back(e.diag);
                recover_statement();
            }
        }
        advance();
        return block;
    }

    StmtPtr parse_statement() {
        std::vector<Directive> pending;
        while (at(TokenKind::PragmaLine)) {
            const Token& tok = advance();
            if (tok.text.rfind("#pragma pencil", 0) != 0) {
                diag("E-SYNTAX", "unsupported preprocessor line: " + tok.text, tok.loc);
                continue;
            }
            try {
                pending.push_back(parse_pragma(tok));
            } catch (const PencilError& e) {
                diag(e.code(), e.what(), tok.loc);
            }
        }
        if (at_punct("}") || at(TokenKind::Eof)) {
            if (!pending.empty())
                diag("E-ATTACH", "pragma directive is not followed by a statement", peek().loc);
            fail("expected a statement", peek().loc);
        }
        StmtPtr stmt = parse_statement_inner();
        stmt->pending_directives = std::move(pending);
        return stmt;
    }

    StmtPtr parse_statement_inner() {
        SourceLoc loc = peek().loc;
        if (at_punct("{")) return parse_block();
        if (at_keyword("for")) return parse_for(loc);
        if (at_keyword("while")) return parse_while(loc);
        if (at_keyword("if")) return parse_if(loc);
        if (at_keyword("return")) return parse_return(loc);
        if (at_keyword("goto")) return parse_goto(loc);
        if (at_keyword("int") || at_keyword("float") || at_keyword("double"))
            return parse_local_decl(loc);
        if (at_keyword("void") || at_keyword("else") || at(TokenKind::Keyword))
            fail("unexpected '" + peek().text + "'", loc);
        if (at(TokenKind::Identifier)) {
            const std::string& word = peek().text;
            if (word == "DEF" || word == "USE" || word == "MAY_DEF") return parse_summary_access(loc);
            if (peek(1).kind == TokenKind::Punctuator && peek(1).text == ":")
                return parse_labeled(loc);
        }
        return parse_expr_statement(loc);
    }

    StmtPtr parse_local_decl(SourceLoc loc) {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::Decl;
        s->loc = loc;
        s->decl_type = parse_type();
        if (at_punct("*")) {
            advance();
            s->decl_is_pointer = true;
        }
        s->name = expect_identifier("variable name");
        while (at_punct("[")) {
            advance();
            s->decl_extents.push_back(parse_expr());
            expect_punct("]");
        }
        if (at_punct("=")) {
            advance();
            s->rhs = parse_expr();
        }
        expect_punct(";");
        return s;
    }

    // Only the normalized shape is accepted:
    //   for ([int] i = lo; i < hi; i++)        (also `<=`, rewritten)
    StmtPtr parse_for(SourceLoc loc) {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::For;
        s->loc = loc;
        advance();  // for
        expect_punct("(");
        if (at_keyword("int")) {
            advance();
            s->loop_var_decl = true;
        }
        s->name = expect_identifier("loop variable");
        expect_punct("=");
        s->lo = parse_expr();
        expect_punct(";");
        std::string var2 = expect_identifier("loop variable");
        if (var2 != s->name) fail("for-loop condition must test the loop variable", peek().loc);
        bool inclusive;
        if (at_punct("<")) inclusive = false;
        else if (at_punct("<=")) inclusive = true;
        else fail("for-loop condition must use '<' or '<='", peek().loc);
        advance();
        s->hi = parse_expr();
        if (inclusive) {
            if (s->hi->kind == ExprKind::IntLit) s->hi->int_val += 1;
            else s->hi = make_binary(BinOp::Add, std::move(s->hi), make_int(1), loc);
        }
        expect_punct(";");
        parse_unit_step(s->name);
        expect_punct(")");
        s->body = parse_statement();
        return s;
    }

    void parse_unit_step(const std::string& var) {
        // i++ | ++i | i += 1 | i = i + 1
        SourceLoc loc = peek().loc;
        if (at_punct("++")) {
            advance();
            if (expect_identifier("loop variable") != var) fail("for-loop step must advance the loop variable", loc);
            return;
        }
        std::string name = expect_identifier("loop variable");
        if (name != var) fail("for-loop step must advance the loop variable", loc);
        if (at_punct("++")) {
            advance();
            return;
        }
        if (at_punct("+=")) {
            advance();
            if (!(at(TokenKind::IntLiteral) && peek().text == "1"))
                fail("for-loop step must be +1", peek().loc);
            advance();
            return;
        }
        if (at_punct("=")) {
            advance();
            ExprPtr e = parse_expr();
            if (e->kind == ExprKind::Binary && e->bin_op == BinOp::Add &&
                e->args[0]->kind == ExprKind::Var && e->args[0]->name == var &&
                e->args[1]->kind == ExprKind::IntLit && e->args[1]->int_val == 1)
                return;
            fail("for-loop step must be +1", loc);
        }
        fail("for-loop step must be +1", loc);
    }

    StmtPtr parse_while(SourceLoc loc) {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::While;
        s->loc = loc;
        advance();
        expect_punct("(");
        s->cond = parse_expr();
        expect_punct(")");
        s->body = parse_statement();
        return s;
    }

    StmtPtr parse_if(SourceLoc loc) {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::If;
        s->loc = loc;
        advance();
        expect_punct("(");
        s->cond = parse_expr();
        expect_punct(")");
        s->then_branch = parse_statement();
        if (at_keyword("else")) {
            advance();
            s->else_branch = parse_statement();
        }
        return s;
    }

    StmtPtr parse_return(SourceLoc loc) {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::Return;
        s->loc = loc;
        advance();
        if (!at_punct(";")) s->rhs = parse_expr();
        expect_punct(";");
        return s;
    }

    StmtPtr parse_goto(SourceLoc loc) {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::Goto;
        s->loc = loc;
        advance();
        s->name = expect_identifier("label");
        expect_punct(";");
        return s;
    }

    StmtPtr parse_labeled(SourceLoc loc) {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::Labeled;
        s->loc = loc;
        s->name = advance().text;
        expect_punct(":");
        s->body = parse_statement_inner();
        return s;
    }

    StmtPtr parse_summary_access(SourceLoc loc) {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::SummaryAccess;
        s->loc = loc;
        const std::string& word = advance().text;
        s->summary_kind = word == "DEF"   ? SummaryKind::Def
                          : word == "USE" ? SummaryKind::Use
                                          : SummaryKind::MayDef;
        expect_punct("(");
        s->lvalue = parse_expr();
        if (s->lvalue->kind != ExprKind::Index && s->lvalue->kind != ExprKind::Var)
            fail(word + " expects an array element or scalar", loc);
        expect_punct(")");
        expect_punct(";");
        return s;
    }

    StmtPtr parse_expr_statement(SourceLoc loc) {
        ExprPtr e = parse_unary();
        auto s = std::make_unique<Stmt>();
        s->loc = loc;
        if (at_punct("=") || at_punct("+=") || at_punct("-=") || at_punct("*=") || at_punct("/=")) {
            const std::string& op = advance().text;
            s->kind = StmtKind::Assign;
            s->assign_op = op == "="    ? AssignOp::Set
                           : op == "+=" ? AssignOp::Add
                           : op == "-=" ? AssignOp::Sub
                           : op == "*=" ? AssignOp::Mul
                                        : AssignOp::Div;
            s->lvalue = std::move(e);
            s->rhs = parse_expr();
            expect_punct(";");
            return s;
        }
        if (at_punct("++") || at_punct("--")) {
            const std::string& op = advance().text;
            s->kind = StmtKind::Assign;
            s->assign_op = op == "++" ? AssignOp::Add : AssignOp::Sub;
            s->lvalue = std::move(e);
            s->rhs = make_int(1, loc);
            expect_punct(";");
            return s;
        }
        if (e->kind == ExprKind::Call) {
            s->kind = StmtKind::CallStmt;
            s->call = std::move(e);
            expect_punct(";");
            return s;
        }
        fail("expected an assignment or a call", loc);
    }

    // -- expressions -------------------------------------------------------

    ExprPtr parse_expr() { return parse_logic_or(); }

    ExprPtr parse_logic_or() {
        ExprPtr e = parse_logic_and();
        while (at_punct("||")) {
            SourceLoc loc = advance().loc;
            e = make_binary(BinOp::LogOr, std::move(e), parse_logic_and(), loc);
        }
        return e;
    }

    ExprPtr parse_logic_and() {
        ExprPtr e = parse_equality();
        while (at_punct("&&")) {
            SourceLoc loc = advance().loc;
            e = make_binary(BinOp::LogAnd, std::move(e), parse_equality(), loc);
        }
        return e;
    }

    ExprPtr parse_equality() {
        ExprPtr e = parse_relational();
        while (at_punct("==") || at_punct("!=")) {
            BinOp op = peek().text == "==" ? BinOp::Eq : BinOp::Ne;
            SourceLoc loc = advance().loc;
            e = make_binary(op, std::move(e), parse_relational(), loc);
        }
        return e;
    }

    ExprPtr parse_relational() {
        ExprPtr e = parse_additive();
        while (at_punct("<") || at_punct("<=") || at_punct(">") || at_punct(">=")) {
            const std::string& t = peek().text;
            BinOp op = t == "<" ? BinOp::Lt : t == "<=" ? BinOp::Le : t == ">" ? BinOp::Gt : BinOp::Ge;
            SourceLoc loc = advance().loc;
            e = make_binary(op, std::move(e), parse_additive(), loc);
        }
        return e;
    }

    ExprPtr parse_additive() {
        ExprPtr e = parse_multiplicative();
        while (at_punct("+") || at_punct("-")) {
            BinOp op = peek().text == "+" ? BinOp::Add : BinOp::Sub;
            SourceLoc loc = advance().loc;
            e = make_binary(op, std::move(e), parse_multiplicative(), loc);
        }
        return e;
    }

    ExprPtr parse_multiplicative() {
        ExprPtr e = parse_unary();
        while (at_punct("*") || at_punct("/") || at_punct("%")) {
            const std::string& t = peek().text;
            BinOp op = t == "*" ? BinOp::Mul : t == "/" ? BinOp::Div : BinOp::Mod;
            SourceLoc loc = advance().loc;
            e = make_binary(op, std::move(e), parse_unary(), loc);
        }
        return e;
    }

    ExprPtr parse_unary() {
        SourceLoc loc = peek().loc;
        if (at_punct("-")) {
            advance();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Unary;
            e->un_op = UnOp::Neg;
            e->loc = loc;
            e->args.push_back(parse_unary());
            return e;
        }
        if (at_punct("!")) {
            advance();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Unary;
            e->un_op = UnOp::LogNot;
            e->loc = loc;
            e->args.push_back(parse_unary());
            return e;
        }
        if (at_punct("&")) {
            advance();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Unary;
            e->un_op = UnOp::AddrOf;
            e->loc = loc;
            e->args.push_back(parse_unary());
            return e;
        }
        if (at_punct("*")) {
            advance();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Unary;
            e->un_op = UnOp::Deref;
            e->loc = loc;
            e->args.push_back(parse_unary());
            return e;
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        while (at_punct("[") || at_punct("(")) {
            if (at_punct("(")) {
                if (e->kind != ExprKind::Var) fail("only named functions can be called", peek().loc);
                SourceLoc loc = advance().loc;
                std::vector<ExprPtr> args;
                if (!at_punct(")")) {
                    args.push_back(parse_expr());
                    while (at_punct(",")) {
                        advance();
                        args.push_back(parse_expr());
                    }
                }
                expect_punct(")");
                e = make_call(e->name, std::move(args), loc);
            } else {
                if (e->kind == ExprKind::Var) {
                    SourceLoc loc = e->loc;
                    std::string base = e->name;
                    std::vector<ExprPtr> subs;
                    while (at_punct("[")) {
                        advance();
                        subs.push_back(parse_expr());
                        expect_punct("]");
                    }
                    e = make_index(base, std::move(subs), loc);
                } else {
                    fail("subscript requires a named array", peek().loc);
                }
            }
        }
        return e;
    }

    ExprPtr parse_primary() {
        SourceLoc loc = peek().loc;
        if (at(TokenKind::IntLiteral)) {
            return make_int(std::stoll(advance().text), loc);
        }
        if (at(TokenKind::FloatLiteral)) {
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::FloatLit;
            e->float_val = std::stod(advance().text);
            e->loc = loc;
            return e;
        }
        if (at(TokenKind::Identifier)) return make_var(advance().text, loc);
        if (at_punct("(")) {
            advance();
            ExprPtr e = parse_expr();
            expect_punct(")");
            return e;
        }
        fail("expected an expression, found '" + peek().text + "'", loc);
    }

    // -- unit-level invariants --------------------------------------------

    void check_unit_invariants(const Ast& ast) {
        std::set<std::string> names;
        for (const auto& fn : ast.functions) {
            if (!names.insert(fn.name).second)
                diag("E-SYNTAX", "duplicate function name '" + fn.name + "'", fn.loc);
        }
        for (const auto& fn : ast.functions) {
            if (fn.access && !names.count(fn.access->callee))
                diag("E-SUMMARY-UNDEF",
                     "ACCESS names undefined function '" + fn.access->callee + "'",
                     fn.access->loc);
        }
    }

    const std::vector<Token>& toks_;
    size_t pos_ = 0;
    std::vector<Diagnostic> diags_;
};

}  // namespace

ParseResult parse_translation_unit(const std::vector<Token>& tokens) {
    return Parser(tokens).run();
}

ParseResult parse_source(const std::string& source) {
    try {
        return parse_translation_unit(tokenize(source));
    } catch (const PencilError& e) {
        ParseResult r;
        r.diagnostics.push_back({e.code(), Severity::Error, e.what(), e.loc(), std::nullopt});
        return r;
    }
}

// ---------------------------------------------------------------------------
// Pragma parsing
// ---------------------------------------------------------------------------

Directive parse_pragma(const Token& pragma_line) {
    const std::string prefix = "#pragma pencil";
    if (pragma_line.kind != TokenKind::PragmaLine || pragma_line.text.rfind(prefix, 0) != 0)
        throw PencilError("E-PRAGMA", "not a pencil pragma line", pragma_line.loc);
    std::vector<Token> toks = tokenize(pragma_line.text.substr(prefix.size()));
    size_t i = 0;
    auto at_p = [&](const std::string& p) {
        return toks[i].kind == TokenKind::Punctuator && toks[i].text == p;
    };
    auto expect_p = [&](const std::string& p) {
        if (!at_p(p))
            throw PencilError("E-PRAGMA", "malformed pencil pragma: expected '" + p + "'",
                              pragma_line.loc);
        ++i;
    };
    if (toks[i].kind != TokenKind::Identifier && toks[i].kind != TokenKind::Keyword)
        throw PencilError("E-PRAGMA", "missing pencil pragma kind", pragma_line.loc);

    Directive d;
    d.loc = pragma_line.loc;
    const std::string kind = toks[i++].text;
    if (kind == "independent") {
        d.kind = Directive::Kind::Independent;
        if (at_p("(")) {
            ++i;
            while (true) {
                if (toks[i].kind != TokenKind::Identifier)
                    throw PencilError("E-PRAGMA", "malformed label list", pragma_line.loc);
                d.labels.push_back(toks[i++].text);
                if (at_p(",")) {
                    ++i;
                    continue;
                }
                break;
            }
            expect_p(")");
        }
    } else if (kind == "reduction") {
        d.kind = Directive::Kind::Reduction;
        expect_p("(");
        if (at_p("+") || at_p("*")) {
            d.reduction_op = toks[i++].text;
        } else if (toks[i].kind == TokenKind::Identifier &&
                   (toks[i].text == "max" || toks[i].text == "min")) {
            d.reduction_op = toks[i++].text;
        } else {
            throw PencilError("E-PRAGMA", "unsupported reduction operator '" + toks[i].text + "'",
                              pragma_line.loc);
        }
        expect_p(":");
        while (true) {
            if (toks[i].kind != TokenKind::Identifier)
                throw PencilError("E-PRAGMA", "malformed reduction variable list", pragma_line.loc);
            d.scalars.push_back(toks[i++].text);
            if (at_p(",")) {
                ++i;
                continue;
            }
            break;
        }
        expect_p(")");
    } else {
        throw PencilError("E-PRAGMA", "unknown pencil pragma '" + kind + "'", pragma_line.loc);
    }
    if (toks[i].kind != TokenKind::Eof)
        throw PencilError("E-PRAGMA", "trailing tokens after pencil pragma", pragma_line.loc);
    return d;
}

// ---------------------------------------------------------------------------
// Directive attachment
// ---------------------------------------------------------------------------

namespace {

void collect_labels(const Stmt& s, std::set<std::string>& out) {
    if (s.kind == StmtKind::Labeled) out.insert(s.name);
    for (const auto& c : s.stmts) collect_labels(*c, out);
    if (s.body) collect_labels(*s.body, out);
    if (s.then_branch) collect_labels(*s.then_branch, out);
    if (s.else_branch) collect_labels(*s.else_branch, out);
}

void collect_decl_names(const Stmt& s, std::set<std::string>& out) {
    if (s.kind == StmtKind::Decl) out.insert(s.name);
    if (s.kind == StmtKind::For && s.loop_var_decl) out.insert(s.name);
    for (const auto& c : s.stmts) collect_decl_names(*c, out);
    if (s.body) collect_decl_names(*s.body, out);
    if (s.then_branch) collect_decl_names(*s.then_branch, out);
    if (s.else_branch) collect_decl_names(*s.else_branch, out);
}

class Attacher {
  public:
    explicit Attacher(std::vector<Diagnostic>& diags) : diags_(diags) {}

    void function(FunctionDef& fn) {
        visible_.clear();
        for (const auto& p : fn.params) visible_.insert(p.name);
        if (fn.body) collect_decl_names(*fn.body, visible_);
        if (fn.body) stmt(*fn.body);
    }

  private:
    void stmt(Stmt& s) {
        if (!s.pending_directives.empty()) attach(s);
        for (auto& c : s.stmts) stmt(*c);
        if (s.body) stmt(*s.body);
        if (s.then_branch) stmt(*s.then_branch);
        if (s.else_branch) stmt(*s.else_branch);
    }

    void attach(Stmt& s) {
        // a label wrapping a loop is a valid target; the loop inside gets
        // the directive
        Stmt* target = &s;
        while (target->kind == StmtKind::Labeled) target = target->body.get();
        std::vector<Directive> pendings = std::move(s.pending_directives);
        s.pending_directives.clear();
        for (auto& d : pendings) {
            if (d.kind == Directive::Kind::Independent) {
                if (target->kind != StmtKind::For && target->kind != StmtKind::While) {
                    error("E-ATTACH", "independent pragma must precede a for- or while-loop", d.loc);
                    continue;
                }
                std::set<std::string> labels;
                if (target->body) collect_labels(*target->body, labels);
                bool ok = true;
                for (const auto& l : d.labels) {
                    if (!labels.count(l)) {
                        error("E-LABEL", "label '" + l + "' does not occur in the loop body", d.loc);
                        ok = false;
                    }
                }
                if (ok) target->directives.push_back(std::move(d));
            } else {
                if (target->kind != StmtKind::For) {
                    error("E-ATTACH", "reduction pragma must precede a for-loop", d.loc);
                    continue;
                }
                bool ok = true;
                for (const auto& v : d.scalars) {
                    if (!visible_.count(v)) {
                        error("E-ATTACH", "reduction variable '" + v + "' is not visible here",
                              d.loc);
                        ok = false;
                    }
                }
                if (ok) target->directives.push_back(std::move(d));
            }
        }
    }

    void error(const std::string& code, const std::string& message, SourceLoc loc) {
        diags_.push_back({code, Severity::Error, message, loc, std::nullopt});
    }

    std::set<std::string> visible_;
    std::vector<Diagnostic>& diags_;
};

}  // namespace

std::vector<Diagnostic> attach_directives(Ast& ast) {
    std::vector<Diagnostic> diags;
    Attacher attacher(diags);
    for (auto& fn : ast.functions) attacher.function(fn);
    return diags;
}

}  // namespace pencil
