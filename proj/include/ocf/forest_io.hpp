#pragma once

#include "ocf/tree.hpp"

#include <string>

namespace ocf {

// Versioned line-oriented text format, one node record per line:
//
//   ocf-forest v1
//   trees 3 features 13
//   fname 0 age
//   tree 0 depth 2 fallback 1
//   node 1 split 4 0.5
//   node 4 leaf 1 support 12
//   ...
//   end
//
// Thresholds are printed with 17 significant digits so doubles survive the
// round trip exactly. `fname` lines are optional; names may contain spaces.
std::string serialize_forest(const Forest& forest);

// Throws ParseError naming the line and offending token.
Forest deserialize_forest(const std::string& text);

}  // namespace ocf
