#pragma once

#include <map>
#include <string>
#include <vector>

#include "pencil/ast.hpp"

namespace pencil {

// ---------------------------------------------------------------------------
// Mesh-loop model: declared sets, indirection maps, data arrays and
// access-hinted parallel loops, reified as data (see docs/op2-input.md).
// ---------------------------------------------------------------------------

struct Op2Set {
    std::string name;
    long long size = 0;
};

struct Op2Map {
    std::string name;
    std::string from, to;
    int arity = 1;
    std::vector<long long> table;  // size(from) * arity entries
};

struct Op2Dat {
    std::string name;
    std::string set;
    int dim = 1;
    std::vector<long long> data;  // size(set) * dim values
};

enum class Op2Access { Read, Write, RW, Inc };

std::string op2_access_name(Op2Access a);

struct Op2Arg {
    std::string dat;
    std::string map;  // empty = identity (direct access by the iteration index)
    int offset = 0;   // slot within the map row; ignored for identity
    Op2Access access = Op2Access::Read;

    bool direct() const { return map.empty(); }
};

struct Op2ParLoop {
    std::string kernel;
    std::string iter_set;
    std::vector<Op2Arg> args;
};

struct Op2Kernel {
    std::string name;
    std::string source;  // pointer-free rewrite, parsed as a PENCIL unit
};

struct Op2Model {
    std::vector<Op2Set> sets;
    std::vector<Op2Map> maps;
    std::vector<Op2Dat> dats;
    std::vector<Op2Kernel> kernels;
    std::vector<Op2ParLoop> par_loops;

    const Op2Set* find_set(const std::string& n) const;
    const Op2Map* find_map(const std::string& n) const;
    const Op2Dat* find_dat(const std::string& n) const;
    const Op2Kernel* find_kernel(const std::string& n) const;
};

/// Parses and validates a model document. Throws PencilError with
/// E-OP2-SHAPE (malformed document, wrong table/data lengths, unknown
/// names) or E-OP2-RANGE (map entry or arg offset out of range).
Op2Model load_op2_model(const std::string& json_text);

// ---------------------------------------------------------------------------
// Lowering
// ---------------------------------------------------------------------------

/// How to invoke a generated driver function concretely: scalar sizes and
/// the model arrays it expects, in parameter order.
struct Op2DriverCall {
    std::string function;

    struct Arg {
        bool is_array = false;
        std::string array;     // model dat/map name
        long long value = 0;   // scalar otherwise
    };
    std::vector<Arg> args;
};

struct Op2Lowered {
    Ast ast;  // parsed kernels plus one driver function per par_loop
    std::vector<Op2DriverCall> drivers;
};

/// Lowers one par_loop into a driver calling its kernel:
///   for (i = 0; i < n; i++) kernel(sizes..., dats..., idx...)
/// where each index is `i` for a direct arg and `map[arity*i + offset]`
/// for an indirect one. Any OP_INC arg attaches a `+` reduction directive
/// naming the incremented dats; otherwise indirect OP_WRITE/OP_RW attach
/// an independent directive. Throws E-OP2-KERNEL on a kernel whose
/// parameter list does not match the arg list, and E-OP2-CONFLICT when a
/// dat is both incremented and read-written in the same loop.
Op2Lowered lower_op2_par_loop(const Op2Model& model, const Op2ParLoop& loop);

/// All par_loops of the model lowered into one unit.
Op2Lowered lower_op2_model(const Op2Model& model);

/// Sequential semantics oracle: runs every par_loop in declaration order
/// directly over the model (kernel bodies executed by the concrete
/// interpreter) and returns the final dat contents.
std::map<std::string, std::vector<long long>> interpret_op2_reference(const Op2Model& model);

}  // namespace pencil
