#pragma once

// Built-in formations used by the bundled scenarios and tests.

#include "bearing/graph.hpp"
#include "bearing/target.hpp"

namespace bearing {

struct Formation {
  FormationGraph graph;
  Configuration configuration;
};

/// Unit square in the plane with every pair connected; leaders at (0,0), (1,0).
Formation k4_square(double side = 1.0);

/// The 20 vertices of a regular dodecahedron with circumradius √3·scale,
/// connected by its 30 sides plus 9 face diagonals (39 edges); agents 1-3 lead.
Formation dodecahedron(double scale = 1.0);

}  // namespace bearing
