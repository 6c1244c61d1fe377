#pragma once

#include <string>
#include <vector>

#include "twindesc/model.hpp"

namespace twindesc {

// Backward reachability closure from `usage` over reversed edges, the
// usage itself included; edges are the induced subset. Cycle-safe.
// Throws Error if the name is unknown or not a Usage node.
Slice extract_slice(const Constellation& c, std::string_view usage);

// One slice per Usage node, in declaration order.
std::vector<Slice> enumerate_slices(const Constellation& c);

// Deterministic DOT rendering: nodes in declaration order, one rank=same
// group per layer (usages top, enablers middle, models/data bottom), node
// ids sanitized as for AAS id_shorts, labels carry the original names.
std::string to_dot(const Constellation& c);
// Same, with the slice's nodes drawn with a distinct style attribute.
std::string to_dot(const Constellation& c, const Slice& highlight);

}  // namespace twindesc
