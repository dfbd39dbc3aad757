#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vemt/geometry.hpp"

namespace vemt {

/// The four mesh families of the convergence study.
enum class MeshFamily { quad, hexa, voro, rand };

MeshFamily parse_mesh_family(std::string_view name);
std::string to_string(MeshFamily family);

/// n x n axis-aligned squares tiling (0,1)^2.
PolyMesh generate_quad(int n);

/// Brick-wall hexagonal tessellation of (0,1)^2 with nx bricks per even row
/// and ny rows. Interior horizontal-line vertices alternate up/down by
/// `pointiness` * row height, which turns each brick into a hexagon; odd
/// rows end in half cells on the lateral sides. Doubly mirror-symmetric
/// when ny is odd.
PolyMesh generate_hex_grid(int nx, int ny, double pointiness = 1.0 / 6.0);

/// Distorted hexagons at refinement `level` (nx = 4 * 2^(level-1),
/// ny = nx + 1), with a smooth sinusoidal vertex perturbation of amplitude
/// `amplitude` * pitch. The amplitude is halved until every cell passes
/// audit_mesh with default thresholds.
PolyMesh generate_hexa(int level, double amplitude = 0.15);

struct VoronoiMesh {
  PolyMesh mesh;
  std::vector<Point> seeds;
  /// CVT energy sum_i int_{V_i} |x - s_i|^2 before each Lloyd step and
  /// after the last one (size lloyd_iters + 1).
  std::vector<double> lloyd_energy;
  /// Number of seeds moved because they coincided with another seed.
  int jittered_seeds = 0;
};

/// Clipped Voronoi tessellation of (0,1)^2 from uniformly random seeds.
/// lloyd_iters = 0 gives the "rand" family, > 0 the "voro" family.
VoronoiMesh generate_voronoi(int n_seeds, int lloyd_iters, std::uint64_t rng_seed);

/// Voronoi tessellation of given seeds, optionally Lloyd-relaxed.
VoronoiMesh voronoi_from_seeds(std::vector<Point> seeds, int lloyd_iters);

/// Level-l mesh of a family, sized so h is proportional to the level-l time
/// step 1/(3 * 2^(l-1)); level 1 of quad is 4x4.
PolyMesh family_mesh(MeshFamily family, int level, std::uint64_t rng_seed = 20250101);

/// Uniform time step paired with a refinement level: 1/3, 1/6, 1/12, 1/24, ...
double level_time_step(int level);

/// Builds a PolyMesh from independently computed polygons, merging
/// coincident vertices (within `tol`) and inserting vertices that lie on a
/// neighbour's edge so adjacency is conforming.
PolyMesh mesh_from_polygons(const std::vector<std::vector<Point>>& polygons, double tol = 1e-10);

}  // namespace vemt
