#pragma once

#include <string>

#include "pencil/ast.hpp"

namespace pencil {

/// The four control structures with fixed parallelism properties:
/// sum (tree-reducible), vector construction (trivially parallel),
/// untilconverged (inherently sequential), gradient (parallel for the
/// batch variant, sequential for the stochastic one).
struct OptimlConstruct {
    enum class Kind { Sum, VectorConstruct, UntilConverged, Gradient };
    enum class GradientVariant { Batch, Stochastic };

    Kind kind = Kind::Sum;
    long long lo = 0, hi = 0;    // Sum / VectorConstruct: inclusive range
    std::string body_fn = "exp";  // Sum: the summand f(i)
    long long init_value = 0;     // VectorConstruct: element initializer
    double threshold = 0.001;     // UntilConverged
    GradientVariant variant = GradientVariant::Batch;
};

/// Parses the small JSON form (see docs/op2-input.md). Throws
/// PencilError("E-OPTIML-SHAPE") on malformed input and E-OPTIML-RANGE
/// on an empty sum range.
OptimlConstruct load_optiml_construct(const std::string& json_text);

/// The canonical source fragment for a construct. For Sum this is the
/// four-line reduction shape:
///   x = f(lo);
///   #pragma pencil reduction (+: x)
///   for (i = lo + 1; i <= hi; i++)
///       x += f(i);
std::string optiml_template_text(const OptimlConstruct& c);

/// The construct as a complete, compliant unit (template wrapped in a
/// function with bound-carrying parameters). Throws E-OPTIML-RANGE on an
/// empty sum range.
Ast lower_optiml(const OptimlConstruct& c);

}  // namespace pencil
