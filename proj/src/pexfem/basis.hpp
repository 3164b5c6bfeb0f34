#pragma once

#include <string>

#include "pexfem/types.hpp"

namespace pexfem {

enum class SpaceTag { V1Cem, V1Glo, V2First, V2Second, V2SecondGlo };

const char* space_tag_name(SpaceTag tag);

struct BasisColumnInfo {
  int owner = -1;          // coarse element or coarse node id
  int index = 0;           // eigenmode index within the owner
  double eigenvalue = 0.0; // spectral origin of the column
};

/// A list of fine-grid coefficient vectors spanning one of the multiscale
/// subspaces, with per-column origin metadata. Columns are ordered by
/// (owner, index).
struct SubspaceBasis {
  SpaceTag tag = SpaceTag::V1Cem;
  Mat cols; // node_count x k
  std::vector<BasisColumnInfo> info;

  int size() const { return static_cast<int>(cols.cols()); }
};

/// Text dump: "<tag> <rows> <cols>" header, then one matrix row per line.
void dump_basis(const SubspaceBasis& basis, const std::string& path);

} // namespace pexfem
