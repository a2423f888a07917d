#include <random>
#include <set>

#include "helpers.hpp"
#include "pencil/interp.hpp"
#include "pencil/summaries.hpp"

using namespace pencil;

namespace {

struct Cell {
    std::string array;
    std::vector<long long> index;
    bool operator<(const Cell& o) const {
        return array != o.array ? array < o.array : index < o.index;
    }
    bool operator==(const Cell& o) const = default;
};

std::set<Cell> cells(const std::vector<AccessRecord>& recs) {
    std::set<Cell> out;
    for (const auto& r : recs) out.insert({r.array, r.index});
    return out;
}

AccessResult run_foo_summary(const Ast& ast, long long n) {
    const FunctionDef* summary = ast.find_function("foo_summary");
    REQUIRE(summary);
    ParamBinding binding;
    binding.scalars["n"] = n;
    return interpret_summary(ast, *summary, binding);
}

}  // namespace

TEST_SUITE("summaries") {

TEST_CASE("binding resolution") {
    Ast ast = testing::parse_corpus("summary_foo.pencil.c");
    auto resolved = resolve_access_bindings(ast);
    CHECK(resolved.diagnostics.empty());
    const AccessBinding* b = resolved.find("foo");
    REQUIRE(b);
    CHECK(b->callee == "foo_summary");
    CHECK(resolved.find("foo_summary") == nullptr);
}

TEST_CASE("arity mismatch in access binding") {
    ParseResult res = parse_source(
        "void s(int n)\n{\n  USE(n);\n}\n"
        "void f(int n, int m) ACCESS(s(n, m))\n{\n}\n");
    REQUIRE(res.ast.has_value());
    auto resolved = resolve_access_bindings(*res.ast);
    REQUIRE(!resolved.diagnostics.empty());
    CHECK(resolved.diagnostics[0].code == "E-SUMMARY-ARITY");
}

TEST_CASE("summary triples for the corpus pair") {
    Ast ast = testing::parse_corpus("summary_foo.pencil.c");

    SUBCASE("n = 3") {
        AccessResult r = run_foo_summary(ast, 3);
        CHECK(cells(r.triple.must_write) ==
              std::set<Cell>{{"A", {0}}, {"A", {1}}, {"A", {2}}, {"C", {0}}});
        CHECK(cells(r.triple.may_write) == std::set<Cell>{{"A", {0}},
                                                          {"A", {1}},
                                                          {"A", {2}},
                                                          {"B", {0}},
                                                          {"B", {1}},
                                                          {"B", {2}},
                                                          {"C", {0}}});
        CHECK(cells(r.triple.read) ==
              std::set<Cell>{{"B", {0}}, {"B", {1}}, {"B", {2}}, {"A", {2}}});
        CHECK(r.warnings.empty());
    }

    SUBCASE("n = 5 skips the guarded def") {
        AccessResult r = run_foo_summary(ast, 5);
        CHECK(!r.triple.contains(AccessKind::MustWrite, "C", {0}));
        CHECK(r.triple.contains(AccessKind::MustWrite, "A", {4}));
        CHECK(r.triple.contains(AccessKind::Read, "A", {4}));
        CHECK(cells(r.triple.must_write).size() == 5);
    }

    SUBCASE("n = 4 boundary: guard just turned false") {
        AccessResult r = run_foo_summary(ast, 4);
        CHECK(!r.triple.contains(AccessKind::MustWrite, "C", {0}));
        CHECK(r.triple.contains(AccessKind::Read, "A", {3}));
    }

    SUBCASE("n = 1") {
        AccessResult r = run_foo_summary(ast, 1);
        CHECK(cells(r.triple.must_write) == std::set<Cell>{{"A", {0}}, {"C", {0}}});
        CHECK(cells(r.triple.read) == std::set<Cell>{{"B", {0}}, {"A", {0}}});
    }

    SUBCASE("n = 0: loop never runs, trailing use goes negative") {
        AccessResult r = run_foo_summary(ast, 0);
        CHECK(r.triple.must_write.empty());
        CHECK(r.triple.may_write.empty());
        CHECK(cells(r.triple.read) == std::set<Cell>{{"A", {-1}}});
        REQUIRE(!r.warnings.empty());
        CHECK(r.warnings[0].code == "E-BOUNDS");
    }
}

TEST_CASE("summarize_call substitutes caller arrays") {
    std::string caller_src =
        "void g(int n, int X[restrict const static n], int Y[restrict const static n],"
        " int Z[restrict const static n])\n{\n}\n";
    Ast unit = testing::parse_unit(testing::read_corpus("summary_foo.pencil.c") + caller_src);
    auto resolved = resolve_access_bindings(unit);
    std::vector<ExprPtr> args;
    args.push_back(make_int(3));
    args.push_back(make_var("X"));
    args.push_back(make_var("Y"));
    args.push_back(make_var("Z"));
    ParamBinding binding;
    AccessResult r = summarize_call(unit, resolved, "foo", args, binding);
    CHECK(r.triple.contains(AccessKind::MustWrite, "X", {0}));
    CHECK(r.triple.contains(AccessKind::MustWrite, "Z", {0}));
    CHECK(r.triple.contains(AccessKind::Read, "Y", {2}));
    CHECK(!r.triple.contains(AccessKind::MustWrite, "A", {0}));
}

TEST_CASE("whitelisted externals have empty triples") {
    Ast ast = testing::parse_unit("void f(int x)\n{\n  x = 0;\n}\n");
    auto resolved = resolve_access_bindings(ast);
    std::vector<ExprPtr> args;
    args.push_back(make_int(1));
    ParamBinding binding;
    AccessResult r = summarize_call(ast, resolved, "exp", args, binding);
    CHECK(r.triple.empty());
}

TEST_CASE("opaque callee without a summary") {
    Ast ast = testing::parse_unit("void f(int x)\n{\n}\n");
    auto resolved = resolve_access_bindings(ast);
    std::vector<ExprPtr> args;
    ParamBinding binding;
    CHECK_THROWS_WITH_AS(summarize_call(ast, resolved, "opaque", args, binding),
                         doctest::Contains("E-NO-SUMMARY"), PencilError);
}

TEST_CASE("unbound scalar parameter is non-affine") {
    Ast ast = testing::parse_corpus("summary_foo.pencil.c");
    const FunctionDef* summary = ast.find_function("foo_summary");
    ParamBinding empty;
    CHECK_THROWS_WITH_AS(interpret_summary(ast, *summary, empty),
                         doctest::Contains("E-NONAFFINE"), PencilError);
}

TEST_CASE("index through array contents is non-affine") {
    Ast ast = testing::parse_unit(
        "void s(int n, int A[restrict const static n], int t[restrict const static n])\n{\n"
        "  DEF(A[t[0]]);\n}\n");
    ParamBinding binding;
    binding.scalars["n"] = 2;
    CHECK_THROWS_WITH_AS(interpret_summary(ast, *ast.find_function("s"), binding),
                         doctest::Contains("E-NONAFFINE"), PencilError);
}

TEST_CASE("summaries may not call into the unit") {
    Ast ast = testing::parse_unit(
        "void helper(int n)\n{\n}\n"
        "void s(int n)\n{\n  helper(n);\n  USE(n);\n}\n");
    ParamBinding binding;
    binding.scalars["n"] = 1;
    CHECK_THROWS_WITH_AS(interpret_summary(ast, *ast.find_function("s"), binding),
                         doctest::Contains("E-NESTED-SUMMARY"), PencilError);
}

TEST_CASE("enumeration budget") {
    Ast ast = testing::parse_unit(
        "void s(int n, int A[restrict const static n])\n{\n"
        "  for (int i = 0; i < n; i++) {\n    DEF(A[i]);\n  }\n}\n");
    ParamBinding binding;
    binding.scalars["n"] = 1000;
    CHECK_THROWS_WITH_AS(interpret_summary(ast, *ast.find_function("s"), binding, 100),
                         doctest::Contains("E-BUDGET"), PencilError);
}

TEST_CASE("determinism") {
    Ast ast = testing::parse_corpus("summary_foo.pencil.c");
    AccessResult a = run_foo_summary(ast, 3);
    AccessResult b = run_foo_summary(ast, 3);
    CHECK(cells(a.triple.read) == cells(b.triple.read));
    CHECK(cells(a.triple.must_write) == cells(b.triple.must_write));
    CHECK(cells(a.triple.may_write) == cells(b.triple.may_write));
}

// the concrete foo body, run with a recorded rand sequence, never writes
// outside may_write and always covers must_write
TEST_CASE("summary soundness against execution traces") {
    Ast ast = testing::parse_corpus("summary_foo.pencil.c");
    for (long long n = 1; n <= 6; ++n) {
        AccessResult summary = run_foo_summary(ast, n);

        Interpreter interp(ast);
        interp.set_array("A", std::vector<Value>(n, 0LL));
        interp.set_array("B", std::vector<Value>(n, 7LL));
        interp.set_array("C", std::vector<Value>(n, 0LL));
        interp.set_rand_sequence({3, 1, 4, 1, 5, 9, 2, 6});
        interp.enable_trace(true);
        interp.call("foo", {Interpreter::Arg::scalar(n), Interpreter::Arg::array("A"),
                            Interpreter::Arg::array("B"), Interpreter::Arg::array("C")});

        std::set<Cell> written, read;
        for (const auto& t : interp.trace())
            (t.is_write ? written : read).insert({t.array, t.index});

        for (const auto& w : written)
            CHECK_MESSAGE(summary.triple.contains(AccessKind::MayWrite, w.array, w.index),
                          "n=", n, ": wrote ", w.array, " outside may_write");
        for (const auto& m : cells(summary.triple.must_write))
            CHECK_MESSAGE(written.count(m) == 1, "n=", n, ": must_write ", m.array,
                          " never written");
        for (const auto& r : read) {
            bool covered = summary.triple.contains(AccessKind::Read, r.array, r.index) ||
                           summary.triple.contains(AccessKind::MayWrite, r.array, r.index);
            CHECK_MESSAGE(covered, "n=", n, ": read ", r.array, " not covered");
        }
    }
}

// randomized summary bodies: the DEF-implies-MAY_DEF invariant must hold
// for every interpretation
TEST_CASE("must_write is always a subset of may_write") {
    std::mt19937 rng(987654321);
    auto pick_index = [&](bool in_loop) -> std::string {
        switch (rng() % 4) {
            case 0: return in_loop ? "i" : "0";
            case 1: return in_loop ? "i + 1" : "1";
            case 2: return "n - 1";
            default: return std::to_string(rng() % 4);
        }
    };
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::string body;
        int stmts = 1 + (int)(rng() % 3);
        for (int s = 0; s < stmts; ++s) {
            const char* kind = (rng() % 3 == 0) ? "DEF" : (rng() % 2 ? "USE" : "MAY_DEF");
            std::string array = (rng() % 2) ? "A" : "B";
            std::string inner =
                std::string(kind) + "(" + array + "[" + pick_index(true) + "]);";
            switch (rng() % 3) {
                case 0:  // straight line
                    body += "  " + std::string(kind) + "(" + array + "[" + pick_index(false) +
                            "]);\n";
                    break;
                case 1:
                    body += "  for (int i = 0; i < n; i++) {\n    " + inner + "\n  }\n";
                    break;
                default:
                    // no loop counter in scope inside a bare conditional
                    body += "  if (n < " + std::to_string(rng() % 5) + ") {\n    " +
                            std::string(kind) + "(" + array + "[" + pick_index(false) +
                            "]);\n  }\n";
                    break;
            }
        }
        std::string src =
            "void s(int n, int A[restrict const static n], int B[restrict const static n])\n"
            "{\n" + body + "}\n";
        Ast ast = testing::parse_unit(src);
        ParamBinding binding;
        binding.scalars["n"] = (long long)(rng() % 5);
        AccessResult r = interpret_summary(ast, *ast.find_function("s"), binding);
        auto may = cells(r.triple.may_write);
        for (const auto& m : cells(r.triple.must_write)) {
            bool subset = may.count(m) == 1;
            CHECK_MESSAGE(subset, "trial ", trial, ": must_write not in may_write");
        }
        ++checked;
    }
    CHECK(checked == 1000);
}

}  // TEST_SUITE
