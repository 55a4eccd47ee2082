#pragma once

#include "ocf/milp.hpp"

#include <string>

namespace ocf {

// Renders the model in LP text format: Minimize / Subject To / Bounds /
// Binaries / End. Output is deterministic — columns and rows appear in model
// order — and numbers are printed with 17 significant digits so every double
// survives a write/parse cycle bit-exactly.
std::string write_lp(const MilpModel& model);

// Parses LP text back into a model. This is a deliberately separate code path
// from write_lp (shared state would let one bug hide another); it accepts the
// common format variations (comments, case-insensitive keywords, split lines)
// rather than just our writer's output. Columns are indexed by first
// appearance in the text, so compare round trips by name, not by position.
MilpModel read_lp(const std::string& text);

// True when the two models describe the same program: same variables (matched
// by name, with type and bounds), same objective, and the same rows in the
// same order with identical coefficients. On mismatch, fills `why` (if given)
// with the first difference found.
bool models_equivalent(const MilpModel& a, const MilpModel& b, std::string* why = nullptr);

}  // namespace ocf
