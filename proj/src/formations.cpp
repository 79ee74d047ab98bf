#include "bearing/formations.hpp"

#include <array>
#include <cmath>

namespace bearing {

Formation k4_square(double side) {
  Eigen::VectorXd p(8);
  p << 0, 0, 1, 0, 1, 1, 0, 1;
  return {complete_graph(4, 2), Configuration::make(2, side * p)};
}

Formation dodecahedron(double scale) {
  const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double kInv = 1.0 / kPhi;
  const std::array<std::array<double, 3>, 20> vertices{{
      {1, 1, -1},      {kInv, -kPhi, 0}, {-kInv, kPhi, 0}, {-1, -1, -1},    {-1, -1, 1},
      {-1, 1, -1},     {-1, 1, 1},       {1, -1, -1},      {1, -1, 1},      {1, 1, 1},
      {0, -kInv, -kPhi}, {-kInv, -kPhi, 0}, {-kPhi, 0, -kInv}, {0, -kInv, kPhi}, {-kPhi, 0, kInv},
      {0, kInv, -kPhi},  {kPhi, 0, -kInv},  {0, kInv, kPhi},   {kInv, kPhi, 0},  {kPhi, 0, kInv},
  }};
  // 30 sides followed by 9 face diagonals that remove the remaining flexes
  std::vector<Edge> edges{
      {0, 5},   {0, 15},  {0, 16},  {0, 18},  {0, 19},  {1, 7},   {1, 8},   {1, 11},
      {1, 13},  {2, 5},   {2, 6},   {2, 12},  {2, 14},  {2, 18},  {3, 10},  {3, 11},
      {3, 12},  {4, 11},  {4, 13},  {4, 14},  {5, 12},  {5, 15},  {6, 14},  {6, 17},
      {7, 10},  {7, 16},  {8, 13},  {8, 17},  {8, 19},  {9, 17},  {9, 18},  {9, 19},
      {10, 15}, {10, 16}, {11, 13}, {12, 14}, {13, 14}, {13, 17}, {16, 19},
  };
  Eigen::VectorXd p(60);
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t k = 0; k < 3; ++k) p(static_cast<Index>(3 * i + k)) = scale * vertices[i][k];
  return {FormationGraph(20, 3, std::move(edges)), Configuration::make(3, p)};
}

}  // namespace bearing
