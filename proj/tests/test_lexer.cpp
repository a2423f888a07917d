#include "doctest.h"
#include "pencil/token.hpp"

using namespace pencil;

TEST_SUITE("lexer") {

TEST_CASE("smallest declaration") {
    auto toks = tokenize("int x;");
    REQUIRE(toks.size() == 4);  // incl. Eof
    CHECK(toks[0].kind == TokenKind::Keyword);
    CHECK(toks[0].text == "int");
    CHECK(toks[1].kind == TokenKind::Identifier);
    CHECK(toks[1].text == "x");
    CHECK(toks[2].kind == TokenKind::Punctuator);
    CHECK(toks[2].text == ";");
    CHECK(toks[3].kind == TokenKind::Eof);
}

TEST_CASE("pencil pragma collapses to one pragma-line token") {
    auto toks = tokenize("#pragma pencil independent\nfor");
    REQUIRE(toks.size() >= 2);
    CHECK(toks[0].kind == TokenKind::PragmaLine);
    CHECK(toks[0].text.find("independent") != std::string::npos);
    CHECK(toks[1].text == "for");
}

TEST_CASE("table-indexed increment") {
    auto toks = tokenize("A[t[i]]++;");
    std::vector<std::string> texts;
    for (const auto& t : toks)
        if (t.kind != TokenKind::Eof) texts.push_back(t.text);
    CHECK(texts == std::vector<std::string>{"A", "[", "t", "[", "i", "]", "]", "++", ";"});
}

TEST_CASE("comments are dropped, locations survive") {
    auto toks = tokenize("/* header */\nint /* mid */ x; // tail\n");
    CHECK(toks[0].text == "int");
    CHECK(toks[0].loc.line == 2);
    CHECK(toks[1].text == "x");
}

TEST_CASE("locations are non-decreasing") {
    auto toks = tokenize("int a;\nint b;\nint c[3];\n");
    for (size_t i = 1; i < toks.size(); ++i) {
        bool ordered = !(toks[i].loc < toks[i - 1].loc);
        CHECK(ordered);
    }
}

TEST_CASE("unterminated comment is a lex error") {
    CHECK_THROWS_WITH_AS(tokenize("int x; /* oops"), doctest::Contains("comment"), PencilError);
}

TEST_CASE("illegal character is a lex error") {
    CHECK_THROWS_AS(tokenize("int x @ y;"), PencilError);
}

TEST_CASE("omp pragma lines are passed over") {
    auto toks = tokenize("#pragma omp parallel for\nint x;");
    CHECK(toks[0].text == "int");
}

TEST_CASE("float and exponent literals") {
    auto toks = tokenize("0.001 2e3 7");
    CHECK(toks[0].kind == TokenKind::FloatLiteral);
    CHECK(toks[1].kind == TokenKind::FloatLiteral);
    CHECK(toks[2].kind == TokenKind::IntLiteral);
}

}  // TEST_SUITE
