#include <algorithm>

#include "helpers.hpp"
#include "pencil/compliance.hpp"
#include "pencil/depanalysis.hpp"
#include "pencil/interp.hpp"
#include "pencil/op2.hpp"

using namespace pencil;

namespace {

std::string mesh_text() { return testing::read_corpus("mesh.json"); }

std::vector<long long> array_data(const Op2Model& model, const std::string& name) {
    if (const Op2Dat* d = model.find_dat(name)) return d->data;
    if (const Op2Map* m = model.find_map(name)) return m->table;
    FAIL("no dat or map named ", name);
    return {};
}

// Binds a generated driver's parameters to the model's concrete contents.
ParamBinding driver_binding(const Op2Model& model, const Ast& ast, const Op2DriverCall& call) {
    const FunctionDef* fn = ast.find_function(call.function);
    REQUIRE(fn);
    REQUIRE(fn->params.size() == call.args.size());
    ParamBinding binding;
    for (size_t i = 0; i < call.args.size(); ++i) {
        if (call.args[i].is_array)
            binding.arrays[fn->params[i].name] = array_data(model, call.args[i].array);
        else
            binding.scalars[fn->params[i].name] = call.args[i].value;
    }
    return binding;
}

}  // namespace

TEST_SUITE("op2") {

TEST_CASE("mesh model loads with the declared shape") {
    Op2Model model = load_op2_model(mesh_text());
    REQUIRE(model.sets.size() == 2);
    CHECK(model.find_set("cells")->size == 3);
    CHECK(model.find_set("edges")->size == 2);
    REQUIRE(model.maps.size() == 1);
    CHECK(model.maps[0].arity == 2);
    CHECK(model.maps[0].table == std::vector<long long>{0, 1, 1, 2});
    CHECK(model.find_dat("dcells")->data == std::vector<long long>{1, 2, 3});
    REQUIRE(model.par_loops.size() == 1);
    CHECK(model.par_loops[0].args.size() == 3);
    CHECK(model.par_loops[0].args[0].direct());
    CHECK(model.par_loops[0].args[1].access == Op2Access::Inc);
}

TEST_CASE("map entry outside the target set") {
    std::string text = mesh_text();
    auto pos = text.find("[0, 1, 1, 2]");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 12, "[0, 1, 1, 5]");
    CHECK_THROWS_WITH_AS(load_op2_model(text), doctest::Contains("E-OP2-RANGE"), PencilError);
}

TEST_CASE("dat with the wrong number of values") {
    std::string text = mesh_text();
    auto pos = text.find("[1, 2, 3]");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 9, "[1, 2, 3, 4]");
    CHECK_THROWS_WITH_AS(load_op2_model(text), doctest::Contains("E-OP2-SHAPE"), PencilError);
}

TEST_CASE("arg offset outside the map arity") {
    std::string text = mesh_text();
    auto pos = text.find("\"offset\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 11, "\"offset\": 2");
    CHECK_THROWS_WITH_AS(load_op2_model(text), doctest::Contains("E-OP2-RANGE"), PencilError);
}

TEST_CASE("reference execution of the mesh") {
    Op2Model model = load_op2_model(mesh_text());
    auto result = interpret_op2_reference(model);
    CHECK(result.at("dcells") == std::vector<long long>{11, 32, 23});
    CHECK(result.at("dedges") == std::vector<long long>{10, 20});
}

TEST_CASE("empty iteration set leaves the data untouched") {
    Op2Model model = load_op2_model(mesh_text());
    for (auto& s : model.sets)
        if (s.name == "edges") s.size = 0;
    for (auto& m : model.maps) m.table.clear();
    for (auto& d : model.dats)
        if (d.set == "edges") d.data.clear();
    auto result = interpret_op2_reference(model);
    CHECK(result.at("dcells") == std::vector<long long>{1, 2, 3});
}

TEST_CASE("an edge joining a cell to itself increments it twice") {
    Op2Model model = load_op2_model(mesh_text());
    for (auto& m : model.maps) m.table = {0, 0, 1, 2};
    auto result = interpret_op2_reference(model);
    CHECK(result.at("dcells") == std::vector<long long>{21, 22, 23});
}

TEST_CASE("increments commute across edge order") {
    Op2Model a_model = load_op2_model(mesh_text());
    Op2Model b_model = load_op2_model(mesh_text());
    for (auto& m : b_model.maps) m.table = {1, 2, 0, 1};
    for (auto& d : b_model.dats)
        if (d.name == "dedges") d.data = {20, 10};
    CHECK(interpret_op2_reference(a_model).at("dcells") ==
          interpret_op2_reference(b_model).at("dcells"));
}

TEST_CASE("lowered driver computes the reference result") {
    Op2Model model = load_op2_model(mesh_text());
    Op2Lowered lowered = lower_op2_model(model);
    REQUIRE(lowered.drivers.size() == 1);

    Interpreter interp(lowered.ast);
    for (const auto& d : model.dats)
        interp.set_array(d.name, std::vector<Value>(d.data.begin(), d.data.end()));
    for (const auto& m : model.maps)
        interp.set_array(m.name, std::vector<Value>(m.table.begin(), m.table.end()));
    std::vector<Interpreter::Arg> args;
    for (const auto& a : lowered.drivers[0].args)
        args.push_back(a.is_array ? Interpreter::Arg::array(a.array)
                                  : Interpreter::Arg::scalar(a.value));
    interp.call(lowered.drivers[0].function, args);

    auto reference = interpret_op2_reference(model).at("dcells");
    std::vector<long long> got;
    for (const auto& v : interp.arrays().at("dcells")) got.push_back(as_int(v));
    CHECK(got == reference);
}

TEST_CASE("lowered unit is compliant") {
    Op2Model model = load_op2_model(mesh_text());
    Op2Lowered lowered = lower_op2_model(model);
    for (const auto& d : check_compliance(lowered.ast))
        CHECK(d.severity != Severity::Error);
}

TEST_CASE("increment loops analyze as reductions, never serial") {
    Op2Model model = load_op2_model(mesh_text());
    Op2Lowered lowered = lower_op2_model(model);
    auto resolved = resolve_access_bindings(lowered.ast);
    ParamBinding binding = driver_binding(model, lowered.ast, lowered.drivers[0]);
    auto reports = analyze_unit(lowered.ast, resolved, &binding);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].verdict == Verdict::ParallelWithReduction);
    REQUIRE(reports[0].reduction_vars.size() == 1);
    CHECK(reports[0].reduction_vars[0] == "dcells");
}

TEST_CASE("indirect write without increment is assumed independent") {
    std::string text = mesh_text();
    // turn both increments into one write and one read-only slot
    auto pos = text.find("\"access\": \"OP_INC\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 18, "\"access\": \"OP_WRITE\"");
    pos = text.find("\"access\": \"OP_INC\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 18, "\"access\": \"OP_READ\"");
    // the kernel must not increment any more; overwrite instead
    pos = text.find("dcells[ic1] += dedges[ie];");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 26, "dcells[ic0] = dedges[ie];");
    pos = text.find("dcells[ic0] += dedges[ie];", pos + 1);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 26, "dcells[ic0] = dedges[ie];");

    Op2Model model = load_op2_model(text);
    Op2Lowered lowered = lower_op2_model(model);
    const FunctionDef* drv = lowered.ast.find_function("kernel_loop");
    REQUIRE(drv);
    const Stmt& loop = *drv->body->stmts[1];
    REQUIRE(loop.directives.size() == 1);
    CHECK(loop.directives[0].kind == Directive::Kind::Independent);
}

TEST_CASE("kernel with a mismatched signature") {
    std::string text = mesh_text();
    auto pos = text.find(", int ic1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 9, "");
    pos = text.find("dcells[ic1]");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 11, "dcells[ic0]");
    Op2Model model = load_op2_model(text);
    CHECK_THROWS_WITH_AS(lower_op2_model(model), doctest::Contains("E-OP2-KERNEL"), PencilError);
}

TEST_CASE("a dat cannot be both incremented and overwritten") {
    std::string text = mesh_text();
    auto pos = text.find("\"access\": \"OP_INC\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 18, "\"access\": \"OP_RW\"");
    Op2Model model = load_op2_model(text);
    CHECK_THROWS_WITH_AS(lower_op2_model(model), doctest::Contains("E-OP2-CONFLICT"),
                         PencilError);
    CHECK_THROWS_WITH_AS(interpret_op2_reference(model), doctest::Contains("E-OP2-CONFLICT"),
                         PencilError);
}

}  // TEST_SUITE
