#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "pencil/compliance.hpp"
#include "pencil/depanalysis.hpp"
#include "pencil/lowering.hpp"
#include "pencil/parser.hpp"
#include "pencil/token.hpp"

namespace {

using namespace pencil;

std::string read_corpus(const std::string& name) {
    std::ifstream in(std::string(CORPUS_DIR) + "/" + name, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Ast parse_unit(const std::string& src) {
    ParseResult res = parse_source(src);
    attach_directives(*res.ast);
    assign_loop_ids(*res.ast);
    return std::move(*res.ast);
}

void BM_tokenize(benchmark::State& state) {
    std::string src = read_corpus("summary_foo.pencil.c");
    for (auto _ : state) benchmark::DoNotOptimize(tokenize(src));
}
BENCHMARK(BM_tokenize);

void BM_parse(benchmark::State& state) {
    std::string src = read_corpus("summary_foo.pencil.c");
    for (auto _ : state) benchmark::DoNotOptimize(parse_source(src));
}
BENCHMARK(BM_parse);

void BM_compliance(benchmark::State& state) {
    Ast ast = parse_unit(read_corpus("summary_foo.pencil.c"));
    for (auto _ : state) benchmark::DoNotOptimize(check_compliance(ast));
}
BENCHMARK(BM_compliance);

void BM_interpret_summary(benchmark::State& state) {
    Ast ast = parse_unit(read_corpus("summary_foo.pencil.c"));
    const FunctionDef* summary = ast.find_function("foo_summary");
    ParamBinding binding;
    binding.scalars["n"] = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(interpret_summary(ast, *summary, binding));
}
BENCHMARK(BM_interpret_summary)->Arg(3)->Arg(64)->Arg(512);

void BM_analyze_table_loop(benchmark::State& state) {
    Ast ast = parse_unit(read_corpus("indirect.pencil.c"));
    auto resolved = resolve_access_bindings(ast);
    ParamBinding binding;
    long long m = state.range(0);
    binding.scalars["n"] = m;
    binding.scalars["m"] = m;
    std::vector<long long> t;
    for (long long i = 0; i < m; ++i) t.push_back(i % (m / 2 + 1));
    binding.arrays["t"] = t;
    const Stmt* loop = ast.find_function("bump")->body->stmts[1].get();
    for (auto _ : state)
        benchmark::DoNotOptimize(analyze_loop(ast, resolved, *loop, &binding));
}
BENCHMARK(BM_analyze_table_loop)->Arg(8)->Arg(32)->Arg(128);

void BM_pretty_print(benchmark::State& state) {
    Ast ast = parse_unit(read_corpus("summary_foo.pencil.c"));
    for (auto _ : state) benchmark::DoNotOptimize(pretty_print(ast));
}
BENCHMARK(BM_pretty_print);

}  // namespace

BENCHMARK_MAIN();
