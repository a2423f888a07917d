#include "pencil/token.hpp"

#include <array>
#include <cctype>

namespace pencil {

bool is_keyword(const std::string& word) {
    static const std::array<const char*, 13> kw = {
        "void", "int", "float", "double", "for", "while", "if", "else",
        "return", "goto", "const", "restrict", "static",
    };
    for (const char* k : kw)
        if (word == k) return true;
    return false;
}

namespace {

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (!at_end()) {
            skip_space_and_comments();
            if (at_end()) break;
            if (peek() == '#' && at_line_start_) {
                if (auto tok = lex_hash_line()) out.push_back(std::move(*tok));
                continue;
            }
            out.push_back(lex_token());
        }
        out.push_back({TokenKind::Eof, "", here()});
        return out;
    }

  private:
    bool at_end() const { return pos_ >= src_.size(); }
    char peek(size_t off = 0) const {
        return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
    }
    SourceLoc here() const { return {line_, col_}; }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
            at_line_start_ = true;
        } else {
            ++col_;
            if (!std::isspace(static_cast<unsigned char>(c))) at_line_start_ = false;
        }
        return c;
    }

    void skip_space_and_comments() {
        while (!at_end()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && peek(1) == '*') {
                SourceLoc start = here();
                advance();
                advance();
                while (!(peek() == '*' && peek(1) == '/')) {
                    if (at_end()) throw PencilError("E-LEX", "unterminated comment", start);
                    advance();
                }
                advance();
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    // A `#` in column-start position owns the rest of the line.
    // `#pragma pencil ...` -> PragmaLine token; `#pragma omp ...` is
    // swallowed (lowered output passes through us); anything else is kept
    // as a PragmaLine token too, so the parser can report E-SYNTAX with a
    // real location.
    std::optional<Token> lex_hash_line() {
        SourceLoc start = here();
        std::string text;
        while (!at_end() && peek() != '\n') text.push_back(advance());
        if (text.rfind("#pragma omp", 0) == 0) return std::nullopt;
        return Token{TokenKind::PragmaLine, text, start};
    }

    Token lex_token() {
        SourceLoc start = here();
        char c = peek();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
                word.push_back(advance());
            return {is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, word, start};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            return lex_number(start);
        }
        if (c == '"') return lex_string(start);
        return lex_punctuator(start);
    }

    Token lex_number(SourceLoc start) {
        std::string text;
        bool is_float = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
        if (peek() == '.') {
            is_float = true;
            text.push_back(advance());
            while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
        }
        if (peek() == 'e' || peek() == 'E') {
            is_float = true;
            text.push_back(advance());
            if (peek() == '+' || peek() == '-') text.push_back(advance());
            while (std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
        }
        return {is_float ? TokenKind::FloatLiteral : TokenKind::IntLiteral, text, start};
    }

    Token lex_string(SourceLoc start) {
        std::string text;
        text.push_back(advance());  // opening quote
        while (peek() != '"') {
            if (at_end() || peek() == '\n')
                throw PencilError("E-LEX", "unterminated string literal", start);
            text.push_back(advance());
        }
        text.push_back(advance());
        return {TokenKind::StringLiteral, text, start};
    }

    Token lex_punctuator(SourceLoc start) {
        static const std::array<const char*, 14> two = {
            "++", "--", "+=", "-=", "*=", "/=", "<=", ">=", "==", "!=", "&&", "||", "->", "::",
        };
        char c = peek();
        for (const char* p : two) {
            if (c == p[0] && peek(1) == p[1]) {
                advance();
                advance();
                return {TokenKind::Punctuator, p, start};
            }
        }
        static const std::string singles = "()[]{};,+-*/%<>=!&|?:.";
        if (singles.find(c) == std::string::npos)
            throw PencilError("E-LEX", std::string("illegal character '") + c + "'", start);
        advance();
        return {TokenKind::Punctuator, std::string(1, c), start};
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    bool at_line_start_ = true;
};

}  // namespace

std::vector<Token> tokenize(const std::string& source) { return Lexer(source).run(); }

}  // namespace pencil
