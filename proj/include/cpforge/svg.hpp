#pragma once

#include <string>

#include "json.hpp"

#include "cpforge/cp_model.hpp"
#include "cpforge/folder.hpp"

namespace cpforge {

// Crease-pattern diagram: one line per edge, styled by assignment.
// Deterministic byte-for-byte.
std::string render_cp_svg(const CreasePattern& cp);

// Compiled flat pattern from a folded-state export document (keys P, SP, CF):
// cell stacks drawn with per-layer offset shading, crease marks tagged with
// their source edge ids.
std::string render_folded_svg(const nlohmann::ordered_json& folded_doc);

}  // namespace cpforge
