#include "pexfem/fields.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace pexfem {

CellField make_cell_field(int n, Vec values) {
  if (values.size() != static_cast<Eigen::Index>(n) * n)
    throw ConfigError("cell field size mismatch: expected " +
                      std::to_string(n * n) + " values, got " +
                      std::to_string(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw ConfigError("cell field values must be strictly positive and finite");
  return CellField{n, std::move(values)};
}

CellField make_constant_field(const FineMesh& mesh, double value) {
  return make_cell_field(mesh.n, Vec::Constant(mesh.cell_count(), value));
}

CellField load_cell_field(const std::string& path, int expected_n) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open grid file: " + path);
  int nx = 0, ny = 0;
  if (!(in >> nx >> ny))
    throw ConfigError("grid file " + path + ": missing 'nx ny' header");
  if (nx != expected_n || ny != expected_n)
    throw ConfigError("grid file " + path + ": size " + std::to_string(nx) +
                      "x" + std::to_string(ny) + " does not match mesh n=" +
                      std::to_string(expected_n));
  Vec values(static_cast<Eigen::Index>(nx) * ny);
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (!(in >> values[i]))
      throw ConfigError("grid file " + path + ": expected " +
                        std::to_string(values.size()) + " values");
  return make_cell_field(nx, std::move(values));
}

void save_cell_field(const CellField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot write grid file: " + path);
  out << field.n << " " << field.n << "\n";
  char buf[32];
  for (int cy = 0; cy < field.n; ++cy) {
    for (int cx = 0; cx < field.n; ++cx) {
      std::snprintf(buf, sizeof buf, "%.17g", field.values[cy * field.n + cx]);
      out << buf << (cx + 1 == field.n ? "\n" : " ");
    }
  }
}

CellField generate_streak_field(int n, double background, double streak_value,
                                std::uint64_t seed, double density) {
  if (!(background > 0.0) || !(streak_value > 0.0))
    throw ConfigError("streak field values must be strictly positive");
  Vec values = Vec::Constant(static_cast<Eigen::Index>(n) * n, background);
  std::mt19937_64 rng(seed);
  const int count = std::max(1, static_cast<int>(std::lround(density * n)));
  std::uniform_int_distribution<int> len_dist(10, 40);
  std::uniform_int_distribution<int> line_dist(0, n - 1);
  std::uniform_int_distribution<int> orient_dist(0, 1);
  for (int s = 0; s < count; ++s) {
    const bool horizontal = orient_dist(rng) == 0;
    const int len = std::min(len_dist(rng), n);
    const int line = line_dist(rng);
    const int start = std::uniform_int_distribution<int>(0, n - len)(rng);
    for (int k = 0; k < len; ++k) {
      const int cx = horizontal ? start + k : line;
      const int cy = horizontal ? line : start + k;
      values[cy * n + cx] = streak_value;
    }
  }
  return make_cell_field(n, std::move(values));
}

} // namespace pexfem
