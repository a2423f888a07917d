#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "pencil/parser.hpp"

namespace testing {

inline std::string corpus_path(const std::string& name) {
    return std::string(CORPUS_DIR) + "/" + name;
}

inline std::string read_corpus(const std::string& name) {
    std::ifstream in(corpus_path(name), std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing corpus file ", name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// parse + attach + loop ids; fails the test on any error diagnostic.
inline pencil::Ast parse_unit(const std::string& source) {
    pencil::ParseResult res = pencil::parse_source(source);
    for (const auto& d : res.diagnostics)
        if (d.severity == pencil::Severity::Error)
            FAIL("unexpected diagnostic [", d.code, "] ", d.message, " at ", d.loc.line, ":",
                 d.loc.column);
    REQUIRE(res.ast.has_value());
    pencil::Ast ast = std::move(*res.ast);
    auto attach = pencil::attach_directives(ast);
    for (const auto& d : attach)
        if (d.severity == pencil::Severity::Error)
            FAIL("unexpected attach diagnostic [", d.code, "] ", d.message);
    pencil::assign_loop_ids(ast);
    return ast;
}

inline pencil::Ast parse_corpus(const std::string& name) { return parse_unit(read_corpus(name)); }

}  // namespace testing
