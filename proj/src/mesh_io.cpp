#include "vemt/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace vemt {

void write_polymesh(std::ostream& out, const PolyMesh& mesh) {
  out << "polymesh 2d\n";
  out << "vertices " << mesh.num_vertices() << "\n";
  out << std::setprecision(17);
  for (const Point& p : mesh.vertices()) out << p.x() << " " << p.y() << "\n";
  out << "cells " << mesh.num_cells() << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c) {
    out << mesh.cell_size(c);
    for (int v : mesh.cell_vertices(c)) out << " " << v;
    out << "\n";
  }
  out << "boundary_edges " << mesh.boundary_edges().size() << "\n";
  for (int e : mesh.boundary_edges()) out << mesh.edge(e).v0 << " " << mesh.edge(e).v1 << " " << mesh.boundary_marker(e) << "\n";
}

namespace {

void expect(std::istream& in, const std::string& word) {
  std::string got;
  if (!(in >> got) || got != word) throw GeometryError("polymesh: expected '" + word + "', got '" + got + "'");
}

}  // namespace

PolyMesh read_polymesh(std::istream& in) {
  expect(in, "polymesh");
  expect(in, "2d");
  expect(in, "vertices");
  size_t nv = 0;
  in >> nv;
  std::vector<Point> v(nv);
  for (auto& p : v) in >> p.x() >> p.y();
  expect(in, "cells");
  size_t nc = 0;
  in >> nc;
  std::vector<std::vector<int>> cells(nc);
  for (auto& loop : cells) {
    size_t n = 0;
    in >> n;
    loop.resize(n);
    for (int& id : loop) in >> id;
  }
  if (!in) throw GeometryError("polymesh: truncated file");
  PolyMesh mesh = PolyMesh::from_cells(std::move(v), cells);

  expect(in, "boundary_edges");
  size_t nb = 0;
  in >> nb;
  std::map<std::pair<int, int>, int> lookup;
  for (int e : mesh.boundary_edges()) lookup[std::minmax(mesh.edge(e).v0, mesh.edge(e).v1)] = e;
  for (size_t i = 0; i < nb; ++i) {
    int a = 0, b = 0, marker = 0;
    in >> a >> b >> marker;
    auto it = lookup.find(std::minmax(a, b));
    if (it == lookup.end()) throw GeometryError("polymesh: tagged edge is not a boundary edge");
    mesh.set_boundary_marker(it->second, marker);
  }
  if (!in) throw GeometryError("polymesh: truncated boundary section");
  return mesh;
}

void write_polymesh_file(const std::string& path, const PolyMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_polymesh(out, mesh);
}

PolyMesh read_polymesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_polymesh(in);
}

void write_vtk_polydata(const std::string& path, const PolyMesh& mesh, const std::vector<VtkField>& point_data,
                        const std::vector<VtkField>& cell_data, const std::vector<VtkVectorField>& cell_vectors) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "# vtk DataFile Version 3.0\n";
  out << "vemt polygonal mesh\n";
  out << "ASCII\n";
  out << "DATASET POLYDATA\n";
  out << std::setprecision(12);
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Point& p : mesh.vertices()) out << p.x() << " " << p.y() << " 0\n";
  size_t list_size = 0;
  for (int c = 0; c < mesh.num_cells(); ++c) list_size += 1 + mesh.cell_size(c);
  out << "POLYGONS " << mesh.num_cells() << " " << list_size << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c) {
    out << mesh.cell_size(c);
    for (int v : mesh.cell_vertices(c)) out << " " << v;
    out << "\n";
  }
  if (!point_data.empty()) {
    out << "POINT_DATA " << mesh.num_vertices() << "\n";
    for (const auto& f : point_data) {
      if (f.values.size() != static_cast<size_t>(mesh.num_vertices()))
        throw std::invalid_argument("vtk: point field '" + f.name + "' has wrong size");
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double x : f.values) out << x << "\n";
    }
  }
  if (!cell_data.empty() || !cell_vectors.empty()) {
    out << "CELL_DATA " << mesh.num_cells() << "\n";
    for (const auto& f : cell_data) {
      if (f.values.size() != static_cast<size_t>(mesh.num_cells()))
        throw std::invalid_argument("vtk: cell field '" + f.name + "' has wrong size");
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double x : f.values) out << x << "\n";
    }
    for (const auto& f : cell_vectors) {
      if (f.values.size() != static_cast<size_t>(mesh.num_cells()))
        throw std::invalid_argument("vtk: cell vector '" + f.name + "' has wrong size");
      out << "VECTORS " << f.name << " double\n";
      for (const Point& x : f.values) out << x.x() << " " << x.y() << " 0\n";
    }
  }
}

}  // namespace vemt
