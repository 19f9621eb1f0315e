// Problem-file ingestion: a line-based sectioned text format with exact
// numbers only; every validation error is reported with its line number.
#pragma once

#include "latvoa/pipeline.hpp"

namespace latvoa {

// Parses and validates a problem file. Throws InputError whose message lists
// every problem found, one per line, with 1-based line positions.
ProblemInstance parse_problem_file(const std::string& path);
ProblemInstance parse_problem_text(const std::string& text, const std::string& origin);

// Canonical text of an instance (round-trips through the parser).
std::string problem_to_text(const ProblemInstance& p);

}  // namespace latvoa
