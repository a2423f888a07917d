#pragma once

#include <string>
#include <vector>

#include "pencil/diag.hpp"

namespace pencil {

enum class TokenKind {
    Keyword,
    Identifier,
    IntLiteral,
    FloatLiteral,
    Punctuator,
    PragmaLine,   // one token per full `#pragma pencil ...` line
    StringLiteral,
    Eof,
};

struct Token {
    TokenKind kind = TokenKind::Eof;
    std::string text;
    SourceLoc loc;
};

/// Splits source text into tokens. Comments are dropped; `#pragma pencil`
/// lines become single PragmaLine tokens; `#pragma omp` lines are passed
/// over silently so lowered output stays re-parseable. Any other `#` line
/// is a lex-level error (E-SYNTAX happens later; here we keep the line as
/// a pragma-like token so the parser can diagnose it with a location).
/// Throws PencilError("E-LEX") on an unterminated comment or illegal
/// character.
std::vector<Token> tokenize(const std::string& source);

bool is_keyword(const std::string& word);

}  // namespace pencil
