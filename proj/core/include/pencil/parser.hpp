#pragma once

#include <optional>
#include <vector>

#include "pencil/ast.hpp"
#include "pencil/token.hpp"

namespace pencil {

struct ParseResult {
    std::optional<Ast> ast;  // present iff no error diagnostics
    std::vector<Diagnostic> diagnostics;
};

/// Recursive-descent parser for the PENCIL subset. Collects E-SYNTAX
/// diagnostics with statement-level recovery; returns an Ast only when
/// the unit parsed cleanly (warnings allowed).
ParseResult parse_translation_unit(const std::vector<Token>& tokens);

/// tokenize + parse. Lex failures come back as diagnostics, so every
/// input yields either an Ast or at least one diagnostic.
ParseResult parse_source(const std::string& source);

/// Parses one `#pragma pencil ...` line. Throws PencilError("E-PRAGMA")
/// on an unknown pencil pragma, malformed label list, or unsupported
/// reduction operator.
Directive parse_pragma(const Token& pragma_line);

/// Moves pending directives onto the loops they precede. Independent may
/// target for- and while-loops, reduction only for-loops (E-ATTACH
/// otherwise). Labels named by an independent clause must occur in the
/// loop body (E-LABEL). Returns the attachment diagnostics.
std::vector<Diagnostic> attach_directives(Ast& ast);

}  // namespace pencil
