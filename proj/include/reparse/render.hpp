#pragma once

#include <string>

#include "reparse/engine.hpp"

namespace reparse {

// Bracketed tree; phrases whose children are all words stay on one line.
std::string render_tree(const Interpretation& interp);
// Role hierarchy, one "LABEL TAG" per line, children indented.
std::string render_roles(const Interpretation& interp);
// One line per meaning root: TAG:CONCEPT ROLE=TAG:CONCEPT ...
// Fillers with their own bindings follow, indented. A trailing '!' marks a
// binding that violates the slot restriction.
std::string render_meaning(const Interpretation& interp);
std::string render_all(const Interpretation& interp);

}  // namespace reparse
