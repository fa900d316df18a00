// Canonical JSON formatting of solver results and audit reports: fixed
// 17-significant-digit floats so identical runs produce identical bytes.
#pragma once

#include <string>

#include "wsp3d/discretization.hpp"
#include "wsp3d/sssp.hpp"
#include "wsp3d/voronoi.hpp"

namespace wsp3d {

std::string solve_json(const WeightedTetMesh& mesh, const SolveResult& res, double epsilon,
                       const std::string& algorithm, const ApproxGraph* graph = nullptr,
                       bool with_paths = false);

std::string audit_json(const AuditReport& rep, double epsilon);

// Debug dump of a 1-d additive Voronoi diagram: breakpoints with the owner of
// the interval to the right of each.
std::string diagram_json(const Diagram1D& diagram);

}  // namespace wsp3d
