#pragma once

// Problem definition files.
//
// A file either names a catalog case ("residual": "C.4", optional "params"
// overrides) or spells out its equations as expression trees. Trees are
// JSON arrays in prefix form:
//
//   3.5, "pi", "t", "x", "y"       constants and coordinates
//   ["x", i]                       coordinate i
//   ["n", i]                       outward normal component i
//   ["u", l, [o0, o1, o2]]         partial of output l (orders may be shorter)
//   ["+", a, b, ...]  ["*", a, b, ...]  ["-", a, b]  ["-", a]  ["/", a, b]
//   ["pow", a, p]                  p must not depend on u
//   ["sin", a]  ["cos", a]  ["exp", a]
//
// Example:
//   {"id": "heat", "dims": 2, "outputs": 1,
//    "domain": {"box": [[0, 1], [0, 1]]},
//    "residual": [["-", ["u", 0, [1, 0]], ["u", 0, [0, 2]]]],
//    "conditions": {
//      "initial": [["-", ["u", 0], ["sin", ["*", "pi", "x"]]]],
//      "boundary": [{"faces": [[1, 0], [1, 1]], "residual": [["u", 0]]}]},
//    "solution": [["*", ["exp", ["*", -9.8696044010893586, "t"]], ["sin", ["*", "pi", "x"]]]],
//    "hyper": {"N": 10, "counts": {"bulk": 1000, "boundary": 200, "initial": 200},
//              "alphas": {"alpha0": 10, "alpha_boundary": 1}, "adam_epochs": 210}}
//
// Faces are [axis, side] pairs or "circle" for a disk. Hyperparameters not
// given fall back to the defaults of the dimension group.

#include <string>

#include "dnnsolve/catalog.hpp"

namespace dnnsolve {

/// Throws ConfigError on malformed documents, unknown case ids or
/// unsupported operators.
BenchmarkCase problem_from_json(const std::string& text);
BenchmarkCase load_problem(const std::string& path);

/// Catalog cases are written by reference (id, params, hyperparameters,
/// notes); file-defined cases carry their expression trees.
std::string problem_to_json(const BenchmarkCase& c);

}  // namespace dnnsolve
