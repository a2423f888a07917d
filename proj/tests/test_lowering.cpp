#include "helpers.hpp"
#include "pencil/compliance.hpp"
#include "pencil/lowering.hpp"
#include "pencil/parser.hpp"

using namespace pencil;

namespace {

const char* kCorpus[] = {
    "foo_simple.pencil.c", "bar.pencil.c",   "summary_foo.pencil.c",
    "indirect.pencil.c",   "sum.pencil.c",   "while_independent.pencil.c",
    "goto.pencil.c",       "recursion.pencil.c", "labels.pencil.c",
    "shift.pencil.c",      "vector.pencil.c",
};

}  // namespace

TEST_SUITE("lowering") {

TEST_CASE("pretty-printing is a fixed point through the parser") {
    for (const char* name : kCorpus) {
        CAPTURE(name);
        Ast ast = testing::parse_corpus(name);
        std::string once = pretty_print(ast);
        Ast again = testing::parse_unit(once);
        CHECK(pretty_print(again) == once);
    }
}

TEST_CASE("printed form keeps structure") {
    for (const char* name : kCorpus) {
        CAPTURE(name);
        Ast ast = testing::parse_corpus(name);
        Ast again = testing::parse_unit(pretty_print(ast));
        REQUIRE(again.functions.size() == ast.functions.size());
        for (size_t i = 0; i < ast.functions.size(); ++i) {
            CHECK(again.functions[i].name == ast.functions[i].name);
            CHECK(again.functions[i].params.size() == ast.functions[i].params.size());
            CHECK(again.functions[i].access.has_value() == ast.functions[i].access.has_value());
        }
    }
}

TEST_CASE("pragmas survive printing") {
    Ast ast = testing::parse_corpus("sum.pencil.c");
    std::string text = pretty_print(ast);
    CHECK(text.find("#pragma pencil reduction (+: x)") != std::string::npos);

    ast = testing::parse_corpus("labels.pencil.c");
    text = pretty_print(ast);
    CHECK(text.find("#pragma pencil independent (l1)") != std::string::npos);
    CHECK(text.find("l1:") != std::string::npos);
}

TEST_CASE("expression printing is precedence-aware") {
    Ast ast = testing::parse_unit(
        "int f(int a, int b, int c)\n{\n  return (a + b) * c - a / (b - c);\n}\n");
    std::string text = pretty_print(ast);
    CHECK(text.find("(a + b) * c - a / (b - c)") != std::string::npos);
}

TEST_CASE("empty function has a canonical form") {
    Ast ast = testing::parse_unit("void f(void)\n{\n}\n");
    CHECK(pretty_print(ast) == "void f(void)\n{\n}\n");
}

TEST_CASE("openmp emission") {
    SUBCASE("parallel for-loop gets the pragma") {
        Ast ast = testing::parse_corpus("vector.pencil.c");
        auto resolved = resolve_access_bindings(ast);
        auto reports = analyze_unit(ast, resolved, nullptr);
        LoweredSource out = emit_openmp(ast, reports);
        CHECK(out.text.find("#pragma omp parallel for\n") != std::string::npos);
        REQUIRE(out.pragma_lines.count(0) == 1);
    }
    SUBCASE("reduction verdict carries the clause with the declared operator") {
        Ast ast = testing::parse_corpus("sum.pencil.c");
        auto resolved = resolve_access_bindings(ast);
        auto reports = analyze_unit(ast, resolved, nullptr);
        LoweredSource out = emit_openmp(ast, reports);
        CHECK(out.text.find("#pragma omp parallel for reduction(+:x)") != std::string::npos);
    }
    SUBCASE("unknown loops are left unchanged") {
        Ast ast = testing::parse_corpus("indirect.pencil.c");
        auto resolved = resolve_access_bindings(ast);
        std::vector<DependenceReport> reports = analyze_unit(ast, resolved, nullptr);
        LoweredSource out = emit_openmp(ast, reports);
        // the unmarked loop stays bare; the marked one is assumed parallel
        CHECK(out.pragma_lines.size() == 1);
    }
    SUBCASE("assumed-parallel while-loop gets a comment marker, not a pragma") {
        Ast ast = testing::parse_corpus("while_independent.pencil.c");
        auto resolved = resolve_access_bindings(ast);
        auto reports = analyze_unit(ast, resolved, nullptr);
        LoweredSource out = emit_openmp(ast, reports);
        CHECK(out.text.find("/* pencil:independent */") != std::string::npos);
        CHECK(out.text.find("#pragma omp") == std::string::npos);
    }
    SUBCASE("emitted text still parses") {
        Ast ast = testing::parse_corpus("sum.pencil.c");
        auto resolved = resolve_access_bindings(ast);
        LoweredSource out = emit_openmp(ast, analyze_unit(ast, resolved, nullptr));
        Ast again = testing::parse_unit(out.text);
        CHECK(again.functions.size() == ast.functions.size());
    }
}

TEST_CASE("reduction variable must be in scope") {
    Ast ast = testing::parse_corpus("vector.pencil.c");
    DependenceReport bogus;
    bogus.loop_id = 0;
    bogus.verdict = Verdict::ParallelWithReduction;
    bogus.reduction_vars = {"zz"};
    CHECK_THROWS_WITH_AS(emit_openmp(ast, {bogus}), doctest::Contains("E-EMIT"), PencilError);
}

TEST_CASE("json report is byte-identical across runs") {
    Ast ast = testing::parse_corpus("summary_foo.pencil.c");
    auto resolved = resolve_access_bindings(ast);
    ParamBinding binding;
    binding.scalars["n"] = 3;

    auto make = [&]() {
        std::vector<FunctionSummaryEntry> summaries;
        summaries.push_back(
            {"foo", interpret_summary(ast, *ast.find_function("foo_summary"), binding)});
        auto reports = analyze_unit(ast, resolved, &binding);
        return emit_report(ast, check_compliance(ast), summaries, reports,
                           {{"fp-reduction-reorders-results", false}});
    };
    std::string a = make();
    std::string b = make();
    CHECK(a == b);
    CHECK(a.back() == '\n');
    CHECK(a.find("\"schema\": \"report-v1\"") != std::string::npos);
}

}  // TEST_SUITE
