#include <random>
#include <set>

#include "helpers.hpp"
#include "pencil/depanalysis.hpp"

using namespace pencil;

namespace {

const Stmt* first_loop(const FunctionDef& fn) {
    for (const auto& s : fn.body->stmts)
        if (s->kind == StmtKind::For || s->kind == StmtKind::While) return s.get();
    return nullptr;
}

struct LoopFixture {
    Ast ast;
    ResolvedSummaries resolved;
    const Stmt* loop = nullptr;
};

LoopFixture fixture(const std::string& src, const std::string& fn_name) {
    LoopFixture f;
    f.ast = testing::parse_unit(src);
    f.resolved = resolve_access_bindings(f.ast);
    const FunctionDef* fn = f.ast.find_function(fn_name);
    REQUIRE(fn);
    f.loop = first_loop(*fn);
    REQUIRE(f.loop);
    return f;
}

bool witnesses_empty(const LoopFixture& f, const ParamBinding& binding) {
    auto accesses = collect_iteration_accesses(f.ast, f.resolved, *f.loop, binding);
    return brute_force_dependences(accesses).empty();
}

}  // namespace

TEST_SUITE("depanalysis") {

TEST_CASE("per-iteration access collection") {
    auto f = fixture(
        "void f(int n, int A[restrict const static n], int B[restrict const static n])\n"
        "{\n  int i;\n  for (i = 0; i < 3; i++) {\n    A[i] = B[i];\n  }\n}\n",
        "f");
    ParamBinding binding;
    binding.scalars["n"] = 3;
    auto accesses = collect_iteration_accesses(f.ast, f.resolved, *f.loop, binding);
    REQUIRE(accesses.size() == 3);
    for (long long k = 0; k < 3; ++k) {
        CHECK(accesses[k].iteration == k);
        CHECK(accesses[k].triple.contains(AccessKind::MustWrite, "A", {k}));
        CHECK(accesses[k].triple.contains(AccessKind::Read, "B", {k}));
    }
}

TEST_CASE("disjoint affine accesses have no dependences") {
    auto f = fixture(
        "void f(int n, int A[restrict const static n], int B[restrict const static n])\n"
        "{\n  int i;\n  for (i = 0; i < 3; i++) {\n    A[i] = B[i];\n  }\n}\n",
        "f");
    ParamBinding binding;
    binding.scalars["n"] = 3;
    CHECK(witnesses_empty(f, binding));
}

TEST_CASE("colliding table gives the exact witness set") {
    LoopFixture f;
    f.ast = testing::parse_corpus("indirect.pencil.c");
    f.resolved = resolve_access_bindings(f.ast);
    f.loop = first_loop(*f.ast.find_function("bump"));
    REQUIRE(f.loop);

    ParamBinding binding;
    binding.scalars["n"] = 2;
    binding.scalars["m"] = 3;
    binding.arrays["t"] = {0, 0, 1};
    auto witnesses =
        brute_force_dependences(collect_iteration_accesses(f.ast, f.resolved, *f.loop, binding));

    REQUIRE(witnesses.size() == 3);
    std::set<DepKind> kinds;
    for (const auto& w : witnesses) {
        kinds.insert(w.kind);
        CHECK(w.src_iter == 0);
        CHECK(w.sink_iter == 1);
        CHECK(w.array == "A");
        CHECK(w.index == std::vector<long long>{0});
    }
    std::set<DepKind> expected{DepKind::RAW, DepKind::WAR, DepKind::WAW};
    CHECK(kinds == expected);
}

TEST_CASE("shifted read carries a RAW chain") {
    LoopFixture f;
    f.ast = testing::parse_corpus("shift.pencil.c");
    f.resolved = resolve_access_bindings(f.ast);
    f.loop = first_loop(*f.ast.find_function("shift"));

    ParamBinding binding;
    binding.scalars["n"] = 3;
    auto witnesses =
        brute_force_dependences(collect_iteration_accesses(f.ast, f.resolved, *f.loop, binding));
    REQUIRE(witnesses.size() == 1);
    CHECK(witnesses[0].kind == DepKind::RAW);
    CHECK(witnesses[0].array == "B");
    CHECK(witnesses[0].index == std::vector<long long>{1});
    CHECK(witnesses[0].src_iter == 1);
    CHECK(witnesses[0].sink_iter == 2);
}

TEST_CASE("unknown indices abort the oracle") {
    LoopFixture f;
    f.ast = testing::parse_corpus("indirect.pencil.c");
    f.resolved = resolve_access_bindings(f.ast);
    f.loop = first_loop(*f.ast.find_function("bump"));
    ParamBinding binding;  // no t contents
    binding.scalars["n"] = 2;
    binding.scalars["m"] = 3;
    auto accesses = collect_iteration_accesses(f.ast, f.resolved, *f.loop, binding);
    CHECK_THROWS_WITH_AS(brute_force_dependences(accesses), doctest::Contains("E-UNKNOWN-INDEX"),
                         PencilError);
}

TEST_CASE("affine fast path") {
    SUBCASE("plain fill is parallel") {
        auto f = fixture(testing::read_corpus("vector.pencil.c"), "fill");
        auto v = affine_fast_path(*f.loop);
        REQUIRE(v.has_value());
        CHECK(*v == Verdict::Parallel);
    }
    SUBCASE("same-index read and write is parallel") {
        auto f = fixture(
            "void f(int n, int A[restrict const static n])\n{\n  int i;\n"
            "  for (i = 0; i < n; i++) {\n    A[i] = A[i] + 1;\n  }\n}\n",
            "f");
        auto v = affine_fast_path(*f.loop);
        REQUIRE(v.has_value());
        CHECK(*v == Verdict::Parallel);
    }
    SUBCASE("shifted read declines") {
        auto f = fixture(testing::read_corpus("shift.pencil.c"), "shift");
        CHECK(!affine_fast_path(*f.loop).has_value());
    }
    SUBCASE("table index declines") {
        auto f = fixture(testing::read_corpus("indirect.pencil.c"), "bump");
        CHECK(!affine_fast_path(*f.loop).has_value());
    }
}

TEST_CASE("verdict precedence on the table loop") {
    Ast ast = testing::parse_corpus("indirect.pencil.c");
    auto resolved = resolve_access_bindings(ast);

    SUBCASE("no pragma, no contents: conservative unknown") {
        auto rep = analyze_loop(ast, resolved, *first_loop(*ast.find_function("bump")), nullptr);
        CHECK(rep.verdict == Verdict::Unknown);
    }
    SUBCASE("independent pragma overrides") {
        auto rep = analyze_loop(ast, resolved,
                                *first_loop(*ast.find_function("bump_independent")), nullptr);
        CHECK(rep.verdict == Verdict::AssumedParallel);
        CHECK(rep.basis == Basis::Directive);
    }
    SUBCASE("contents prove serial") {
        ParamBinding binding;
        binding.scalars["n"] = 2;
        binding.scalars["m"] = 3;
        binding.arrays["t"] = {0, 0, 1};
        auto rep = analyze_loop(ast, resolved, *first_loop(*ast.find_function("bump")), &binding);
        CHECK(rep.verdict == Verdict::Serial);
        CHECK(rep.basis == Basis::Enumeration);
        CHECK(!rep.witnesses.empty());
    }
    SUBCASE("injective contents prove parallel") {
        ParamBinding binding;
        binding.scalars["n"] = 3;
        binding.scalars["m"] = 3;
        binding.arrays["t"] = {2, 0, 1};
        auto rep = analyze_loop(ast, resolved, *first_loop(*ast.find_function("bump")), &binding);
        CHECK(rep.verdict == Verdict::Parallel);
        CHECK(rep.witnesses.empty());
    }
}

TEST_CASE("reduction verdict on the sum loop") {
    Ast ast = testing::parse_corpus("sum.pencil.c");
    auto resolved = resolve_access_bindings(ast);
    auto rep = analyze_loop(ast, resolved, *first_loop(*ast.find_function("sum_loop")), nullptr);
    CHECK(rep.verdict == Verdict::ParallelWithReduction);
    CHECK(rep.basis == Basis::Directive);
    REQUIRE(rep.reduction_vars.size() == 1);
    CHECK(rep.reduction_vars[0] == "x");
}

TEST_CASE("label-scoped independence keeps unlisted conflicts") {
    auto f = fixture(
        "void f(int n, int m, int A[restrict const static n],"
        " int B[restrict const static n], int t[restrict const static m])\n{\n  int i;\n"
        "  #pragma pencil independent (l1)\n"
        "  for (i = 0; i < m; i++) {\n"
        "    l1: A[t[i]] += 1;\n"
        "    B[0] = B[0] + i;\n  }\n}\n",
        "f");
    ParamBinding binding;
    binding.scalars["n"] = 2;
    binding.scalars["m"] = 3;
    binding.arrays["t"] = {0, 0, 1};
    auto rep = analyze_loop(f.ast, f.resolved, *f.loop, &binding);
    CHECK(rep.verdict == Verdict::Serial);
    for (const auto& w : rep.witnesses) CHECK(w.array == "B");
}

TEST_CASE("label-scoped independence discharges listed conflicts") {
    Ast ast = testing::parse_corpus("labels.pencil.c");
    auto resolved = resolve_access_bindings(ast);
    ParamBinding binding;
    binding.scalars["n"] = 2;
    binding.scalars["m"] = 3;
    binding.arrays["t"] = {0, 0, 1};
    auto rep = analyze_loop(ast, resolved, *first_loop(*ast.find_function("mix")), &binding);
    CHECK(rep.verdict == Verdict::AssumedParallel);
}

TEST_CASE("while loops") {
    Ast ast = testing::parse_corpus("while_independent.pencil.c");
    const Stmt* with = first_loop(*ast.find_function("drain"));
    const Stmt* without = first_loop(*ast.find_function("drain_plain"));
    CHECK(analyze_while(*with).verdict == Verdict::AssumedParallel);
    CHECK(analyze_while(*without).verdict == Verdict::Unknown);
}

TEST_CASE("analyze_unit covers every loop") {
    Ast ast = testing::parse_corpus("indirect.pencil.c");
    auto resolved = resolve_access_bindings(ast);
    auto reports = analyze_unit(ast, resolved, nullptr);
    CHECK(reports.size() == 2);
    std::set<int> ids;
    for (const auto& r : reports) ids.insert(r.loop_id);
    std::set<int> expected{0, 1};
    CHECK(ids == expected);
}

// ---------------------------------------------------------------------------
// Randomized properties
// ---------------------------------------------------------------------------

namespace {

struct GeneratedLoop {
    std::string source;
    ParamBinding binding;
};

GeneratedLoop generate_loop(std::mt19937& rng) {
    long long N = 1 + (long long)(rng() % 8);
    std::string body;
    int stmts = 1 + (int)(rng() % 3);
    for (int s = 0; s < stmts; ++s) {
        switch (rng() % 6) {
            case 0: body += "    A[i] = B[i];\n"; break;
            case 1: body += "    A[i + " + std::to_string(rng() % 4) + "] = 0;\n"; break;
            case 2: body += "    A[2 * i] = B[i];\n"; break;
            case 3: body += "    A[" + std::to_string(rng() % 4) + "] = B[i];\n"; break;
            case 4: body += "    B[i] = B[i - 1];\n"; break;
            default: body += "    A[t[i]] += 1;\n"; break;
        }
    }
    GeneratedLoop g;
    g.source =
        "void f(int n, int m, int A[restrict const static n],"
        " int B[restrict const static n], int t[restrict const static m])\n"
        "{\n  int i;\n  for (i = 0; i < " + std::to_string(N) + "; i++) {\n" + body +
        "  }\n}\n";
    g.binding.scalars["n"] = 32;
    g.binding.scalars["m"] = N;
    std::vector<long long> t;
    for (long long k = 0; k < N; ++k) t.push_back((long long)(rng() % 8));
    g.binding.arrays["t"] = t;
    return g;
}

}  // namespace

TEST_CASE("enumeration verdict agrees with the brute-force oracle") {
    std::mt19937 rng(13371337);
    int agreements = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        GeneratedLoop g = generate_loop(rng);
        auto f = fixture(g.source, "f");
        auto rep = analyze_loop(f.ast, f.resolved, *f.loop, &g.binding);
        REQUIRE((rep.verdict == Verdict::Parallel || rep.verdict == Verdict::Serial));
        bool empty = witnesses_empty(f, g.binding);
        CHECK_MESSAGE((rep.verdict == Verdict::Parallel) == empty, "trial ", trial,
                      " disagrees:\n", g.source);
        ++agreements;
    }
    CHECK(agreements == 1000);
}

TEST_CASE("affine fast-path parallel claims are never contradicted") {
    std::mt19937 rng(24682468);
    int claims = 0;
    for (int trial = 0; trial < 400; ++trial) {
        GeneratedLoop g = generate_loop(rng);
        auto f = fixture(g.source, "f");
        auto v = affine_fast_path(*f.loop);
        if (!v || *v != Verdict::Parallel) continue;
        ++claims;
        CHECK_MESSAGE(witnesses_empty(f, g.binding), "trial ", trial, " affine unsound:\n",
                      g.source);
    }
    CHECK(claims > 20);  // the generator must actually exercise the path
}

TEST_CASE("adding an independent directive never yields SERIAL") {
    std::mt19937 rng(555000111);
    for (int trial = 0; trial < 300; ++trial) {
        GeneratedLoop g = generate_loop(rng);
        auto plain = fixture(g.source, "f");
        Verdict base = analyze_loop(plain.ast, plain.resolved, *plain.loop, &g.binding).verdict;

        std::string marked_src = g.source;
        auto pos = marked_src.find("  for (");
        REQUIRE(pos != std::string::npos);
        marked_src.insert(pos, "  #pragma pencil independent\n");
        auto marked = fixture(marked_src, "f");
        Verdict with =
            analyze_loop(marked.ast, marked.resolved, *marked.loop, &g.binding).verdict;

        CHECK(with != Verdict::Serial);
        if (base == Verdict::Parallel)
            CHECK((with == Verdict::Parallel || with == Verdict::AssumedParallel));
    }
}

}  // TEST_SUITE
