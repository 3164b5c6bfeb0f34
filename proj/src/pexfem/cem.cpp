#include "pexfem/cem.hpp"

#include <cstdio>
#include <memory>
#include <fstream>

#include "pexfem/saddle.hpp"

namespace pexfem {

const char* space_tag_name(SpaceTag tag) {
  switch (tag) {
  case SpaceTag::V1Cem: return "V1_cem";
  case SpaceTag::V1Glo: return "V1_glo";
  case SpaceTag::V2First: return "V2_first";
  case SpaceTag::V2Second: return "V2_second";
  case SpaceTag::V2SecondGlo: return "V2_second_glo";
  }
  return "?";
}

void dump_basis(const SubspaceBasis& basis, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot write basis dump: " + path);
  out << space_tag_name(basis.tag) << " " << basis.cols.rows() << " "
      << basis.cols.cols() << "\n";
  char buf[32];
  for (Eigen::Index r = 0; r < basis.cols.rows(); ++r) {
    for (Eigen::Index c = 0; c < basis.cols.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", basis.cols(r, c));
      out << buf << (c + 1 == basis.cols.cols() ? "\n" : " ");
    }
  }
}

namespace {

SubspaceBasis solve_cem_patches(const FineSystem& sys,
                                const CoarseDecomposition& decomp,
                                const SForm& sform, const AuxSpace& aux,
                                int layers, bool global) {
  SubspaceBasis basis;
  basis.tag = global ? SpaceTag::V1Glo : SpaceTag::V1Cem;
  basis.cols = Mat::Zero(sys.mesh.node_count(), aux.total());

  // The global variant is a single patch covering the whole domain, so the
  // bordered matrix is factored once and reused for every right-hand side.
  std::unique_ptr<SaddleSolver> global_solver;
  std::vector<int> all_elements;
  if (global) {
    all_elements.resize(decomp.element_count());
    for (int e = 0; e < decomp.element_count(); ++e)
      all_elements[e] = e;
    const SpMat C = restrict_cols(
        aux_constraint_rows(aux, sform.S_loc, decomp, all_elements,
                            sys.mesh.node_count()),
        sys.interior, sys.mesh.node_count());
    global_solver = std::make_unique<SaddleSolver>(sys.A_int, C);
  }

  int col = 0;
  for (int e = 0; e < decomp.element_count(); ++e) {
    const std::vector<int> elements =
        global ? all_elements : decomp.patch_elements(e, layers);
    const std::vector<int> dofs =
        global ? sys.interior : decomp.patch_interior_nodes(e, layers);

    std::unique_ptr<SaddleSolver> local_solver;
    const SaddleSolver* solver = global_solver.get();
    if (!global) {
      const SpMat C = restrict_cols(
          aux_constraint_rows(aux, sform.S_loc, decomp, elements,
                              sys.mesh.node_count()),
          dofs, sys.mesh.node_count());
      local_solver =
          std::make_unique<SaddleSolver>(sys.A.submatrix(dofs), C);
      solver = local_solver.get();
    }

    for (int j = 0; j < aux.count(e); ++j, ++col) {
      Vec g = Vec::Zero(solver->constraint_count());
      g[constraint_row_index(aux, elements, e, j)] = 1.0;
      Vec phi;
      try {
        phi = solver->solve(Vec::Zero(solver->primal_size()), g);
      } catch (const NumericError& err) {
        throw NumericError("cem basis (" + std::to_string(e) + "," +
                           std::to_string(j) + "): " + err.what());
      }
      for (size_t r = 0; r < dofs.size(); ++r)
        basis.cols(dofs[r], col) = phi[r];
      basis.info.push_back({e, j, aux.eigenvalues[e][j]});
    }
  }
  return basis;
}

} // namespace

SubspaceBasis build_cem_basis(const FineSystem& sys,
                              const CoarseDecomposition& decomp,
                              const SForm& sform, const AuxSpace& aux,
                              int layers) {
  if (layers < 1)
    throw ConfigError("cem basis: need at least one oversampling layer");
  return solve_cem_patches(sys, decomp, sform, aux, layers, false);
}

SubspaceBasis build_global_cem_basis(const FineSystem& sys,
                                     const CoarseDecomposition& decomp,
                                     const SForm& sform, const AuxSpace& aux) {
  return solve_cem_patches(sys, decomp, sform, aux, 0, true);
}

} // namespace pexfem
