#include "pexfem/system.hpp"

namespace pexfem {

FineSystem build_fine_system(const FineMesh& mesh, CellField kappa) {
  FineSystem sys;
  sys.mesh = mesh;
  sys.A = assemble_stiffness(mesh, kappa);
  sys.M = assemble_mass(mesh);
  sys.kappa = std::move(kappa);
  sys.interior = mesh.interior_nodes();
  sys.A_int = sys.A.submatrix(sys.interior);
  sys.M_int = sys.M.submatrix(sys.interior);
  return sys;
}

} // namespace pexfem
