#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vemt/geometry.hpp"

namespace vemt {

/// Plain-text mesh format:
///
///     polymesh 2d
///     vertices <N>
///     <x> <y>                      (N lines)
///     cells <M>
///     <n> <v_0> ... <v_{n-1}>      (M lines, counter-clockwise)
///     boundary_edges <B>
///     <v0> <v1> <marker>           (B lines)
///
/// Coordinates are written with 17 significant digits, so a write/read
/// cycle reproduces the mesh bit for bit.
void write_polymesh(std::ostream& out, const PolyMesh& mesh);
PolyMesh read_polymesh(std::istream& in);
void write_polymesh_file(const std::string& path, const PolyMesh& mesh);
PolyMesh read_polymesh_file(const std::string& path);

struct VtkField {
  std::string name;
  std::vector<double> values;  // one value per point (or cell)
};

struct VtkVectorField {
  std::string name;
  std::vector<Point> values;
};

/// VTK legacy ASCII POLYDATA with the mesh vertices as points and cells as
/// polygons.
void write_vtk_polydata(const std::string& path, const PolyMesh& mesh, const std::vector<VtkField>& point_data,
                        const std::vector<VtkField>& cell_data = {},
                        const std::vector<VtkVectorField>& cell_vectors = {});

}  // namespace vemt
