#include <sstream>

#include "json.hpp"
#include "pencil/optiml.hpp"
#include "pencil/parser.hpp"

namespace pencil {

namespace {

using json = nlohmann::json;

[[noreturn]] void shape_error(const std::string& msg) { throw PencilError("E-OPTIML-SHAPE", msg); }

void check_sum_range(const OptimlConstruct& c) {
    if (c.kind == OptimlConstruct::Kind::Sum && c.hi < c.lo)
        throw PencilError("E-OPTIML-RANGE", "empty sum range " + std::to_string(c.lo) + ".." +
                                                std::to_string(c.hi));
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    std::string t = os.str();
    if (t.find('.') == std::string::npos && t.find('e') == std::string::npos) t += ".0";
    return t;
}

std::string num(long long v) { return std::to_string(v); }

}  // namespace

OptimlConstruct load_optiml_construct(const std::string& json_text) {
    json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) shape_error("input is not a JSON object");
    if (!doc.contains("kind") || !doc["kind"].is_string()) shape_error("missing construct kind");

    OptimlConstruct c;
    std::string kind = doc["kind"].get<std::string>();
    if (kind == "sum") {
        c.kind = OptimlConstruct::Kind::Sum;
        c.lo = doc.value("lo", 0);
        c.hi = doc.value("hi", 0);
        c.body_fn = doc.value("body", "exp");
    } else if (kind == "vector") {
        c.kind = OptimlConstruct::Kind::VectorConstruct;
        c.lo = doc.value("lo", 0);
        c.hi = doc.value("hi", 0);
        c.init_value = doc.value("init", 0);
    } else if (kind == "untilconverged") {
        c.kind = OptimlConstruct::Kind::UntilConverged;
        c.threshold = doc.value("threshold", 0.001);
    } else if (kind == "gradient") {
        c.kind = OptimlConstruct::Kind::Gradient;
        std::string variant = doc.value("variant", "batch");
        if (variant == "batch") {
            c.variant = OptimlConstruct::GradientVariant::Batch;
        } else if (variant == "stochastic") {
            c.variant = OptimlConstruct::GradientVariant::Stochastic;
        } else {
            shape_error("unknown gradient variant '" + variant + "'");
        }
    } else {
        shape_error("unknown construct kind '" + kind + "'");
    }
    return c;
}

std::string optiml_template_text(const OptimlConstruct& c) {
    check_sum_range(c);
    switch (c.kind) {
        case OptimlConstruct::Kind::Sum:
            return "x = " + c.body_fn + "(" + num(c.lo) + ");\n" +
                   "#pragma pencil reduction (+: x)\n" +
                   "for (i = " + num(c.lo + 1) + "; i <= " + num(c.hi) + "; i++)\n" +
                   "    x += " + c.body_fn + "(i);\n";
        case OptimlConstruct::Kind::VectorConstruct:
            return "for (i = 0; i <= " + num(c.hi - c.lo) + "; i++)\n" +
                   "    my_vector[i] = " + num(c.init_value) + ";\n";
        case OptimlConstruct::Kind::UntilConverged:
            return "while (delta > " + fmt(c.threshold) + ")\n" +
                   std::string("    delta = delta / 2.0;\n");
        case OptimlConstruct::Kind::Gradient:
            if (c.variant == OptimlConstruct::GradientVariant::Batch)
                return "#pragma pencil independent\n"
                       "for (i = 0; i < n; i++)\n"
                       "    g[i] = g[i] + d[i];\n";
            return "for (i = 0; i < n; i++)\n"
                   "    w[0] = w[0] + d[i];\n";
    }
    return "";
}

Ast lower_optiml(const OptimlConstruct& c) {
    check_sum_range(c);
    std::string src;
    switch (c.kind) {
        case OptimlConstruct::Kind::Sum:
            src = "void optiml_sum(void)\n{\n  double x;\n  int i;\n  x = " + c.body_fn + "(" +
                  num(c.lo) + ");\n  #pragma pencil reduction (+: x)\n  for (i = " +
                  num(c.lo + 1) + "; i <= " + num(c.hi) + "; i++)\n  {\n    x += " + c.body_fn +
                  "(i);\n  }\n}\n";
            break;
        case OptimlConstruct::Kind::VectorConstruct:
            src = "void optiml_vector(int n, int my_vector[restrict const static n])\n{\n"
                  "  int i;\n  for (i = 0; i <= " +
                  num(c.hi - c.lo) +
                  "; i++)\n  {\n    my_vector[i] = " + num(c.init_value) + ";\n  }\n}\n";
            break;
        case OptimlConstruct::Kind::UntilConverged:
            src = "void optiml_untilconverged(double delta)\n{\n  while (delta > " +
                  fmt(c.threshold) + ")\n  {\n    delta = delta / 2.0;\n  }\n}\n";
            break;
        case OptimlConstruct::Kind::Gradient:
            if (c.variant == OptimlConstruct::GradientVariant::Batch) {
                src = "void optiml_gradient_batch(int n, double g[restrict const static n], "
                      "double d[restrict const static n])\n{\n  int i;\n"
                      "  #pragma pencil independent\n  for (i = 0; i < n; i++)\n  {\n"
                      "    g[i] = g[i] + d[i];\n  }\n}\n";
            } else {
                src = "void optiml_gradient_stochastic(int n, double w[restrict const static n], "
                      "double d[restrict const static n])\n{\n  int i;\n"
                      "  for (i = 0; i < n; i++)\n  {\n    w[0] = w[0] + d[i];\n  }\n}\n";
            }
            break;
    }
    ParseResult res = parse_source(src);
    if (!res.ast)
        throw PencilError("E-OPTIML-SHAPE",
                          "generated unit does not parse: " +
                              (res.diagnostics.empty() ? "unknown error"
                                                       : res.diagnostics.front().message));
    Ast ast = std::move(*res.ast);
    auto attach = attach_directives(ast);
    if (has_errors(attach))
        throw PencilError("E-OPTIML-SHAPE", "generated directives do not attach");
    assign_loop_ids(ast);
    return ast;
}

}  // namespace pencil
