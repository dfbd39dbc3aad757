#include "vemt/mesh_generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <unordered_map>

#include "vemt/audit.hpp"

namespace vemt {

MeshFamily parse_mesh_family(std::string_view name) {
  if (name == "quad") return MeshFamily::quad;
  if (name == "hexa") return MeshFamily::hexa;
  if (name == "voro") return MeshFamily::voro;
  if (name == "rand") return MeshFamily::rand;
  throw std::invalid_argument("unknown mesh family: " + std::string(name));
}

std::string to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::quad: return "quad";
    case MeshFamily::hexa: return "hexa";
    case MeshFamily::voro: return "voro";
    case MeshFamily::rand: return "rand";
  }
  return "?";
}

double level_time_step(int level) {
  if (level < 1) throw std::invalid_argument("level must be >= 1");
  return 1.0 / (3.0 * std::pow(2.0, level - 1));
}

PolyMesh generate_quad(int n) {
  if (n < 1) throw std::invalid_argument("generate_quad: n must be >= 1");
  std::vector<Point> v;
  v.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) v.emplace_back(double(i) / n, double(j) / n);
  // exact endpoints
  for (auto& p : v) {
    if (std::abs(p.x() - 1.0) < 1e-15) p.x() = 1.0;
    if (std::abs(p.y() - 1.0) < 1e-15) p.y() = 1.0;
  }
  std::vector<std::vector<int>> cells;
  cells.reserve(n * n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return PolyMesh::from_cells(std::move(v), cells);
}

namespace {

// Corner positions (in units of half a brick width) of row r.
std::vector<int> row_corners(int r, int nx) {
  std::vector<int> m;
  if (r % 2 == 0) {
    for (int i = 0; i <= nx; ++i) m.push_back(2 * i);
  } else {
    m.push_back(0);
    for (int i = 0; i < nx; ++i) m.push_back(2 * i + 1);
    m.push_back(2 * nx);
  }
  return m;
}

struct HexTopology {
  std::vector<Point> vertices;
  std::vector<std::vector<int>> cells;
};

HexTopology hex_topology(int nx, int ny, double pointiness) {
  const double w = 1.0 / nx;
  const double hrow = 1.0 / ny;
  HexTopology topo;
  // line j holds corners of rows j-1 and j
  std::vector<std::map<int, int>> line_vertex(ny + 1);
  for (int j = 0; j <= ny; ++j) {
    std::vector<int> below = j > 0 ? row_corners(j - 1, nx) : std::vector<int>{};
    std::vector<int> above = j < ny ? row_corners(j, nx) : std::vector<int>{};
    std::vector<int> all = below;
    all.insert(all.end(), above.begin(), above.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    for (int m : all) {
      const bool in_below = std::binary_search(below.begin(), below.end(), m);
      const bool in_above = std::binary_search(above.begin(), above.end(), m);
      double y = j * hrow;
      if (j > 0 && j < ny) {
        if (in_above && !in_below) y += pointiness * hrow;
        if (in_below && !in_above) y -= pointiness * hrow;
      }
      double x = m == 2 * nx ? 1.0 : 0.5 * m * w;
      if (j == ny) y = 1.0;
      line_vertex[j][m] = static_cast<int>(topo.vertices.size());
      topo.vertices.emplace_back(x, y);
    }
  }
  for (int r = 0; r < ny; ++r) {
    const auto corners = row_corners(r, nx);
    for (size_t b = 0; b + 1 < corners.size(); ++b) {
      const int ma = corners[b], mb = corners[b + 1];
      std::vector<int> loop;
      for (auto it = line_vertex[r].lower_bound(ma); it != line_vertex[r].end() && it->first <= mb; ++it)
        loop.push_back(it->second);
      std::vector<int> top;
      for (auto it = line_vertex[r + 1].lower_bound(ma); it != line_vertex[r + 1].end() && it->first <= mb; ++it)
        top.push_back(it->second);
      loop.insert(loop.end(), top.rbegin(), top.rend());
      topo.cells.push_back(std::move(loop));
    }
  }
  return topo;
}

bool on_boundary(double s) { return s == 0.0 || s == 1.0; }

}  // namespace

PolyMesh generate_hex_grid(int nx, int ny, double pointiness) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("generate_hex_grid: nx, ny must be >= 1");
  auto topo = hex_topology(nx, ny, pointiness);
  return PolyMesh::from_cells(std::move(topo.vertices), topo.cells);
}

PolyMesh generate_hexa(int level, double amplitude) {
  if (level < 1) throw std::invalid_argument("generate_hexa: level must be >= 1");
  const int nx = 4 << (level - 1);
  const int ny = nx + 1;
  const auto topo = hex_topology(nx, ny, 1.0 / 6.0);
  const double pitch = 1.0 / nx;
  const double two_pi = 2.0 * std::numbers::pi;
  for (double amp = amplitude * pitch; amp > 1e-6 * pitch; amp *= 0.5) {
    std::vector<Point> v = topo.vertices;
    for (Point& p : v) {
      const double x = p.x(), y = p.y();
      // wavelengths of a few cells so the distortion does not fade under refinement
      double dx = amp * std::sin(two_pi * x * nx / 2.7 + 0.3) * std::cos(two_pi * y * ny / 3.3 + 1.1);
      double dy = amp * std::cos(two_pi * x * nx / 3.1 + 0.7) * std::sin(two_pi * y * ny / 2.3 + 0.2);
      if (on_boundary(x)) dx = 0.0;
      if (on_boundary(y)) dy = 0.0;
      p = Point(std::clamp(x + dx, 0.0, 1.0), std::clamp(y + dy, 0.0, 1.0));
    }
    try {
      PolyMesh mesh = PolyMesh::from_cells(std::move(v), topo.cells);
      if (audit_mesh(mesh).all_pass()) return mesh;
    } catch (const GeometryError&) {
      // retry with a smaller perturbation
    }
  }
  return PolyMesh::from_cells(topo.vertices, topo.cells);
}

namespace {

class VertexMerger {
 public:
  explicit VertexMerger(double tol) : tol_(tol), bucket_(std::max(1e3 * tol, 1e-9)) {}

  int insert(const Point& p) {
    const long ix = static_cast<long>(std::floor(p.x() / bucket_));
    const long iy = static_cast<long>(std::floor(p.y() / bucket_));
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = buckets_.find(key(ix + dx, iy + dy));
        if (it == buckets_.end()) continue;
        for (int id : it->second)
          if ((points_[id] - p).norm() <= tol_) return id;
      }
    const int id = static_cast<int>(points_.size());
    points_.push_back(p);
    buckets_[key(ix, iy)].push_back(id);
    return id;
  }

  std::vector<Point>& points() { return points_; }

 private:
  static long long key(long ix, long iy) { return (static_cast<long long>(ix) << 32) ^ (iy & 0xffffffffLL); }
  double tol_;
  double bucket_;
  std::vector<Point> points_;
  std::unordered_map<long long, std::vector<int>> buckets_;
};

}  // namespace

PolyMesh mesh_from_polygons(const std::vector<std::vector<Point>>& polygons, double tol) {
  VertexMerger merger(tol);
  std::vector<std::vector<int>> cells;
  cells.reserve(polygons.size());
  for (const auto& poly : polygons) {
    std::vector<int> loop;
    for (const Point& p : poly) {
      const int id = merger.insert(p);
      if (loop.empty() || loop.back() != id) loop.push_back(id);
    }
    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    cells.push_back(std::move(loop));
  }
  auto& pts = merger.points();

  // snap to the unit-square boundary
  for (Point& p : pts) {
    for (int d = 0; d < 2; ++d) {
      if (std::abs(p[d]) < tol) p[d] = 0.0;
      if (std::abs(p[d] - 1.0) < tol) p[d] = 1.0;
    }
  }

  // conforming fix-up: insert vertices lying on the interior of a cell edge
  const int grid = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(pts.size())) / 2));
  std::vector<std::vector<int>> bins(static_cast<size_t>(grid) * grid);
  auto bin_of = [grid](double s) { return std::clamp(static_cast<int>(s * grid), 0, grid - 1); };
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) bins[bin_of(pts[i].y()) * grid + bin_of(pts[i].x())].push_back(i);

  for (auto& loop : cells) {
    std::vector<int> fixed;
    const size_t n = loop.size();
    for (size_t j = 0; j < n; ++j) {
      const int a = loop[j], b = loop[(j + 1) % n];
      fixed.push_back(a);
      const Point pa = pts[a], pb = pts[b];
      const Point d = pb - pa;
      const double len2 = d.squaredNorm();
      std::vector<std::pair<double, int>> on_edge;
      const int x0 = bin_of(std::min(pa.x(), pb.x()) - tol), x1 = bin_of(std::max(pa.x(), pb.x()) + tol);
      const int y0 = bin_of(std::min(pa.y(), pb.y()) - tol), y1 = bin_of(std::max(pa.y(), pb.y()) + tol);
      for (int by = y0; by <= y1; ++by)
        for (int bx = x0; bx <= x1; ++bx)
          for (int id : bins[by * grid + bx]) {
            if (id == a || id == b) continue;
            const double s = (pts[id] - pa).dot(d) / len2;
            if (s <= 0.0 || s >= 1.0) continue;
            if ((pa + s * d - pts[id]).norm() <= 10.0 * tol) on_edge.emplace_back(s, id);
          }
      std::sort(on_edge.begin(), on_edge.end());
      for (const auto& [s, id] : on_edge) fixed.push_back(id);
    }
    loop = std::move(fixed);
  }

  // drop unused vertices
  std::vector<int> remap(pts.size(), -1);
  std::vector<Point> used;
  for (auto& loop : cells)
    for (int& v : loop) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(used.size());
        used.push_back(pts[v]);
      }
      v = remap[v];
    }
  return PolyMesh::from_cells(std::move(used), cells);
}

namespace {

std::vector<Point> unit_square() { return {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)}; }

class SeedGrid {
 public:
  explicit SeedGrid(const std::vector<Point>& seeds) : seeds_(seeds) {
    n_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(seeds.size()))));
    bins_.resize(static_cast<size_t>(n_) * n_);
    for (int i = 0; i < static_cast<int>(seeds.size()); ++i) bins_[bin(seeds[i].y()) * n_ + bin(seeds[i].x())].push_back(i);
  }

  // Clipped Voronoi cell of seed i; neighbours visited ring by ring until no
  // further seed can cut the cell.
  std::vector<Point> cell(int i) const {
    std::vector<Point> poly = unit_square();
    const Point s = seeds_[i];
    const int bx = bin(s.x()), by = bin(s.y());
    const double w = 1.0 / n_;
    for (int ring = 0; ring <= n_; ++ring) {
      double reach = 0.0;
      for (const Point& p : poly) reach = std::max(reach, (p - s).norm());
      // all seeds in rings >= ring are at least (ring-1)*w away
      if (ring >= 2 && 0.5 * (ring - 1) * w > reach) break;
      std::vector<std::pair<double, int>> candidates;
      for (int jy = by - ring; jy <= by + ring; ++jy)
        for (int jx = bx - ring; jx <= bx + ring; ++jx) {
          if (std::max(std::abs(jx - bx), std::abs(jy - by)) != ring) continue;
          if (jx < 0 || jy < 0 || jx >= n_ || jy >= n_) continue;
          for (int j : bins_[jy * n_ + jx])
            if (j != i) candidates.emplace_back((seeds_[j] - s).squaredNorm(), j);
        }
      std::sort(candidates.begin(), candidates.end());
      for (const auto& [d2, j] : candidates) {
        const Point nrm = seeds_[j] - s;
        poly = clip_halfplane(poly, nrm, nrm.dot(0.5 * (seeds_[j] + s)));
      }
    }
    return poly;
  }

 private:
  int bin(double x) const { return std::clamp(static_cast<int>(x * n_), 0, n_ - 1); }
  const std::vector<Point>& seeds_;
  int n_ = 1;
  std::vector<std::vector<int>> bins_;
};

// int over the polygon of |x - s|^2; fan triangles with the edge-midpoint rule (exact for quadratics)
double second_moment(const std::vector<Point>& poly, const Point& s) {
  const Point c = polygon_centroid(poly);
  double acc = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % poly.size()];
    const double area = 0.5 * orient(c, a, b);
    const Point m1 = 0.5 * (c + a), m2 = 0.5 * (a + b), m3 = 0.5 * (b + c);
    acc += area / 3.0 * ((m1 - s).squaredNorm() + (m2 - s).squaredNorm() + (m3 - s).squaredNorm());
  }
  return acc;
}

int jitter_duplicates(std::vector<Point>& seeds) {
  int events = 0;
  std::vector<int> order(seeds.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  bool again = true;
  while (again) {
    again = false;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return seeds[a].x() < seeds[b].x() || (seeds[a].x() == seeds[b].x() && seeds[a].y() < seeds[b].y());
    });
    for (size_t k = 0; k + 1 < order.size(); ++k) {
      Point& p = seeds[order[k + 1]];
      if ((p - seeds[order[k]]).norm() < 1e-12) {
        ++events;
        const double angle = 2.399963229728653 * events;  // golden angle
        p += 1e-7 * Point(std::cos(angle), std::sin(angle));
        p = p.cwiseMax(Point(1e-9, 1e-9)).cwiseMin(Point(1 - 1e-9, 1 - 1e-9));
        again = true;
      }
    }
  }
  return events;
}

}  // namespace

VoronoiMesh voronoi_from_seeds(std::vector<Point> seeds, int lloyd_iters) {
  if (seeds.size() < 2) throw std::invalid_argument("voronoi: need at least 2 seeds");
  if (lloyd_iters < 0) throw std::invalid_argument("voronoi: lloyd_iters must be >= 0");
  VoronoiMesh out;
  out.jittered_seeds = jitter_duplicates(seeds);
  std::vector<std::vector<Point>> cells(seeds.size());
  auto tessellate = [&]() {
    SeedGrid grid(seeds);
    double energy = 0.0;
    for (size_t i = 0; i < seeds.size(); ++i) {
      cells[i] = grid.cell(static_cast<int>(i));
      energy += second_moment(cells[i], seeds[i]);
    }
    return energy;
  };
  for (int it = 0; it < lloyd_iters; ++it) {
    out.lloyd_energy.push_back(tessellate());
    for (size_t i = 0; i < seeds.size(); ++i) seeds[i] = polygon_centroid(cells[i]);
    out.jittered_seeds += jitter_duplicates(seeds);
  }
  out.lloyd_energy.push_back(tessellate());
  out.mesh = mesh_from_polygons(cells);
  out.seeds = std::move(seeds);
  return out;
}

VoronoiMesh generate_voronoi(int n_seeds, int lloyd_iters, std::uint64_t rng_seed) {
  if (n_seeds < 2) throw std::invalid_argument("generate_voronoi: n_seeds must be >= 2");
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Point> seeds(n_seeds);
  for (auto& s : seeds) {
    const double x = unif(rng);
    const double y = unif(rng);
    s = Point(x, y);
  }
  return voronoi_from_seeds(std::move(seeds), lloyd_iters);
}

PolyMesh family_mesh(MeshFamily family, int level, std::uint64_t rng_seed) {
  if (level < 1) throw std::invalid_argument("family_mesh: level must be >= 1");
  const int n = 4 << (level - 1);
  switch (family) {
    case MeshFamily::quad: return generate_quad(n);
    case MeshFamily::hexa: return generate_hexa(level);
    case MeshFamily::voro: return generate_voronoi(n * n, 100, rng_seed + level).mesh;
    case MeshFamily::rand: return generate_voronoi(n * n, 0, rng_seed + level).mesh;
  }
  throw std::invalid_argument("family_mesh: unknown family");
}

}  // namespace vemt
