#include "pexfem/mesh.hpp"

namespace pexfem {

FineMesh build_fine_mesh(int n) {
  if (n < 2)
    throw ConfigError("invalid mesh: need at least 2 cells per side, got " +
                      std::to_string(n));
  return FineMesh{n};
}

std::vector<char> FineMesh::boundary_mask() const {
  std::vector<char> mask(node_count(), 0);
  for (int v = 0; v < node_count(); ++v)
    mask[v] = is_boundary_node(v) ? 1 : 0;
  return mask;
}

std::vector<int> FineMesh::interior_nodes() const {
  std::vector<int> idx;
  idx.reserve((n - 1) * (n - 1));
  for (int v = 0; v < node_count(); ++v)
    if (!is_boundary_node(v))
      idx.push_back(v);
  return idx;
}

} // namespace pexfem
