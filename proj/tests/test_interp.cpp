#include "helpers.hpp"
#include "pencil/interp.hpp"

using namespace pencil;

TEST_SUITE("interp") {

TEST_CASE("arithmetic and return values") {
    Ast ast = testing::parse_unit(
        "int f(int a, int b)\n{\n  int r;\n  r = a * b + a / b - a % b;\n  return r;\n}\n");
    Interpreter interp(ast);
    Value v = interp.call("f", {Interpreter::Arg::scalar(7LL), Interpreter::Arg::scalar(3LL)});
    CHECK(as_int(v) == 7 * 3 + 7 / 3 - 7 % 3);
}

TEST_CASE("arrays are shared through calls") {
    Ast ast = testing::parse_unit(
        "void set(int n, int A[restrict const static n])\n{\n  A[1] = 42;\n}\n"
        "void run(int n, int A[restrict const static n])\n{\n  set(n, A);\n  A[0] = A[1];\n}\n");
    Interpreter interp(ast);
    interp.set_array("mem", {0LL, 0LL, 0LL});
    interp.call("run", {Interpreter::Arg::scalar(3LL), Interpreter::Arg::array("mem")});
    CHECK(as_int(interp.arrays()["mem"][0]) == 42);
    CHECK(as_int(interp.arrays()["mem"][1]) == 42);
}

TEST_CASE("loops and conditionals") {
    Ast ast = testing::parse_unit(
        "int tri(int n)\n{\n  int s;\n  int i;\n  s = 0;\n"
        "  for (i = 1; i <= n; i++) {\n    if (i % 2 == 0) {\n      s += i;\n    }\n  }\n"
        "  return s;\n}\n");
    Interpreter interp(ast);
    CHECK(as_int(interp.call("tri", {Interpreter::Arg::scalar(6LL)})) == 2 + 4 + 6);
}

TEST_CASE("while loop") {
    Ast ast = testing::parse_unit(
        "int halve(int n)\n{\n  int c;\n  c = 0;\n"
        "  while (n > 1) {\n    n = n / 2;\n    c += 1;\n  }\n  return c;\n}\n");
    Interpreter interp(ast);
    CHECK(as_int(interp.call("halve", {Interpreter::Arg::scalar(16LL)})) == 4);
}

TEST_CASE("rand pops the configured sequence, then falls back deterministically") {
    Ast ast = testing::parse_unit(
        "void take(int n, int A[restrict const static n])\n{\n  int i;\n"
        "  for (i = 0; i < n; i++) {\n    A[i] = rand();\n  }\n}\n");
    Interpreter a(ast), b(ast);
    for (auto* it : {&a, &b}) {
        it->set_array("A", std::vector<Value>(5, 0LL));
        it->set_rand_sequence({9, 8});
        it->call("take", {Interpreter::Arg::scalar(5LL), Interpreter::Arg::array("A")});
    }
    CHECK(as_int(a.arrays()["A"][0]) == 9);
    CHECK(as_int(a.arrays()["A"][1]) == 8);
    for (int i = 0; i < 5; ++i)
        CHECK(as_int(a.arrays()["A"][i]) == as_int(b.arrays()["A"][i]));
}

TEST_CASE("trace records reads and writes in order") {
    Ast ast = testing::parse_unit(
        "void copy(int n, int A[restrict const static n], int B[restrict const static n])\n"
        "{\n  A[0] = B[1];\n}\n");
    Interpreter interp(ast);
    interp.set_array("A", {0LL, 0LL});
    interp.set_array("B", {5LL, 6LL});
    interp.enable_trace(true);
    interp.call("copy", {Interpreter::Arg::scalar(2LL), Interpreter::Arg::array("A"),
                         Interpreter::Arg::array("B")});
    REQUIRE(interp.trace().size() == 2);
    CHECK(interp.trace()[0].array == "B");
    CHECK(interp.trace()[0].index == std::vector<long long>{1});
    CHECK(!interp.trace()[0].is_write);
    CHECK(interp.trace()[1].array == "A");
    CHECK(interp.trace()[1].is_write);
}

TEST_CASE("floating point values") {
    Ast ast = testing::parse_unit(
        "float scale(float x)\n{\n  return x * 0.5;\n}\n");
    Interpreter interp(ast);
    CHECK(as_double(interp.call("scale", {Interpreter::Arg::scalar(3.0)})) ==
          doctest::Approx(1.5));
}

TEST_CASE("out-of-bounds store access faults") {
    Ast ast = testing::parse_unit(
        "void f(int n, int A[restrict const static n])\n{\n  A[n] = 1;\n}\n");
    Interpreter interp(ast);
    interp.set_array("A", {0LL, 0LL});
    CHECK_THROWS_WITH_AS(
        interp.call("f", {Interpreter::Arg::scalar(2LL), Interpreter::Arg::array("A")}),
        doctest::Contains("E-INTERP"), PencilError);
}

TEST_CASE("unknown function faults") {
    Ast ast = testing::parse_unit("void f(int n)\n{\n}\n");
    Interpreter interp(ast);
    CHECK_THROWS_WITH_AS(interp.call("nope", {}), doctest::Contains("E-INTERP"), PencilError);
}

TEST_CASE("step budget stops runaway loops") {
    Ast ast = testing::parse_unit(
        "void spin(int n)\n{\n  while (n < 1) {\n    n = n - 1;\n  }\n}\n");
    Interpreter interp(ast);
    CHECK_THROWS_WITH_AS(interp.call("spin", {Interpreter::Arg::scalar(0LL)}),
                         doctest::Contains("E-INTERP"), PencilError);
}

}  // TEST_SUITE
