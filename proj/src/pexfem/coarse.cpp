#include "pexfem/coarse.hpp"

#include <cmath>

namespace pexfem {

namespace {

// Fine cells/nodes of the coarse-element rectangle [exlo,exhi] x [eylo,eyhi].
std::vector<int> rect_cells(const FineMesh& mesh, int m, int exlo, int exhi,
                            int eylo, int eyhi) {
  std::vector<int> out;
  out.reserve(static_cast<size_t>(exhi - exlo + 1) * (eyhi - eylo + 1) * m * m);
  for (int cy = eylo * m; cy < (eyhi + 1) * m; ++cy)
    for (int cx = exlo * m; cx < (exhi + 1) * m; ++cx)
      out.push_back(mesh.cell_index(cx, cy));
  return out;
}

std::vector<int> rect_nodes(const FineMesh& mesh, int m, int exlo, int exhi,
                            int eylo, int eyhi, bool strict_interior) {
  const int axs = exlo * m + (strict_interior ? 1 : 0);
  const int bxs = (exhi + 1) * m - (strict_interior ? 1 : 0);
  const int ays = eylo * m + (strict_interior ? 1 : 0);
  const int bys = (eyhi + 1) * m - (strict_interior ? 1 : 0);
  std::vector<int> out;
  for (int iy = ays; iy <= bys; ++iy)
    for (int ix = axs; ix <= bxs; ++ix)
      out.push_back(mesh.node_index(ix, iy));
  return out;
}

} // namespace

CoarseDecomposition build_coarse_decomposition(const FineMesh& mesh, int N,
                                               int layers) {
  if (N < 2 || mesh.n % N != 0)
    throw ConfigError("coarse decomposition: fine n=" + std::to_string(mesh.n) +
                      " must be a multiple of coarse N=" + std::to_string(N) +
                      " with N >= 2");
  if (layers < 0)
    throw ConfigError("coarse decomposition: layers must be nonnegative");

  CoarseDecomposition d;
  d.mesh = mesh;
  d.N = N;
  d.default_layers = layers;
  const int m = d.m();

  d.element_cells.resize(d.element_count());
  d.element_nodes.resize(d.element_count());
  for (int ey = 0; ey < N; ++ey)
    for (int ex = 0; ex < N; ++ex) {
      const int e = ey * N + ex;
      d.element_cells[e] = rect_cells(mesh, m, ex, ex, ey, ey);
      d.element_nodes[e] = rect_nodes(mesh, m, ex, ex, ey, ey, false);
    }

  d.omega_cells.resize(d.coarse_node_count());
  d.omega_nodes.resize(d.coarse_node_count());
  d.omega_interior_nodes.resize(d.coarse_node_count());
  d.coarse_interior.resize(d.coarse_node_count());
  d.color.resize(d.coarse_node_count());
  for (int gy = 0; gy <= N; ++gy)
    for (int gx = 0; gx <= N; ++gx) {
      const int g = gy * (N + 1) + gx;
      const int exlo = std::max(gx - 1, 0), exhi = std::min(gx, N - 1);
      const int eylo = std::max(gy - 1, 0), eyhi = std::min(gy, N - 1);
      d.omega_cells[g] = rect_cells(mesh, m, exlo, exhi, eylo, eyhi);
      d.omega_nodes[g] = rect_nodes(mesh, m, exlo, exhi, eylo, eyhi, false);
      d.omega_interior_nodes[g] =
          rect_nodes(mesh, m, exlo, exhi, eylo, eyhi, true);
      d.coarse_interior[g] = (gx > 0 && gx < N && gy > 0 && gy < N) ? 1 : 0;
      d.color[g] = (gx % 2) + 2 * (gy % 2);
    }

  // Bilinear coarse hats sampled at fine nodes; support is omega_i.
  std::vector<Triplet> trips;
  for (int g = 0; g < d.coarse_node_count(); ++g) {
    const int gx = g % (N + 1), gy = g / (N + 1);
    for (int v : d.omega_nodes[g]) {
      const int ix = v % (mesh.n + 1), iy = v / (mesh.n + 1);
      const double tx = 1.0 - std::abs(static_cast<double>(ix) / m - gx);
      const double ty = 1.0 - std::abs(static_cast<double>(iy) / m - gy);
      const double val = std::max(0.0, tx) * std::max(0.0, ty);
      if (val != 0.0)
        trips.emplace_back(v, g, val);
    }
  }
  d.chi.resize(mesh.node_count(), d.coarse_node_count());
  d.chi.setFromTriplets(trips.begin(), trips.end());
  d.chi.makeCompressed();
  return d;
}

std::vector<int> CoarseDecomposition::interior_coarse_nodes() const {
  std::vector<int> out;
  for (int g = 0; g < coarse_node_count(); ++g)
    if (coarse_interior[g])
      out.push_back(g);
  return out;
}

std::vector<int> CoarseDecomposition::patch_elements(int element,
                                                     int layers) const {
  const int ex = element % N, ey = element / N;
  std::vector<int> out;
  for (int jy = std::max(ey - layers, 0); jy <= std::min(ey + layers, N - 1); ++jy)
    for (int jx = std::max(ex - layers, 0); jx <= std::min(ex + layers, N - 1); ++jx)
      out.push_back(jy * N + jx);
  return out;
}

std::vector<int> CoarseDecomposition::patch_cells(int element, int layers) const {
  const int ex = element % N, ey = element / N;
  return rect_cells(mesh, m(), std::max(ex - layers, 0),
                    std::min(ex + layers, N - 1), std::max(ey - layers, 0),
                    std::min(ey + layers, N - 1));
}

std::vector<int> CoarseDecomposition::patch_nodes(int element, int layers) const {
  const int ex = element % N, ey = element / N;
  return rect_nodes(mesh, m(), std::max(ex - layers, 0),
                    std::min(ex + layers, N - 1), std::max(ey - layers, 0),
                    std::min(ey + layers, N - 1), false);
}

std::vector<int> CoarseDecomposition::patch_interior_nodes(int element,
                                                           int layers) const {
  const int ex = element % N, ey = element / N;
  return rect_nodes(mesh, m(), std::max(ex - layers, 0),
                    std::min(ex + layers, N - 1), std::max(ey - layers, 0),
                    std::min(ey + layers, N - 1), true);
}

Vec CoarseDecomposition::pou_gradient_sq_per_cell() const {
  Vec out(mesh.cell_count());
  const double Hsq = H() * H();
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const int cx = c % mesh.n, cy = c / mesh.n;
    // local coordinates of the cell center inside its coarse cell
    const double s = (cx % m() + 0.5) / m();
    const double t = (cy % m() + 0.5) / m();
    const double gx2 = (1 - s) * (1 - s) + s * s;
    const double gy2 = (1 - t) * (1 - t) + t * t;
    out[c] = 2.0 * (gx2 + gy2) / Hsq;
  }
  return out;
}

} // namespace pexfem
