#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "surfpde/evolution.hpp"
#include "surfpde/mesh.hpp"

namespace surfpde {

/// Locale-independent decimal formatting ('.' separator, shortest-faithful
/// general format, `precision` significant digits).
std::string format_double(double v, int precision = 12);

/// ASCII OFF writer, 17 significant digits (exact double round trip).
/// Triangle meshes only; curves go through write_curve.
void write_off(const SurfaceMesh& mesh, std::ostream& out);
void write_off_file(const SurfaceMesh& mesh, const std::string& path);

/// Curve writer, counterpart of load_curve.
void write_curve(const SurfaceMesh& mesh, std::ostream& out);
void write_curve_file(const SurfaceMesh& mesh, const std::string& path);

/// CSV writer: header row plus data rows, no locale dependence. An empty row
/// set yields a header-only file.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

/// Legacy ASCII VTK unstructured-grid snapshot (cell type 5 for triangles,
/// 3 for segments) with a point-data scalar field.
void write_vtk(const std::string& path, const std::string& title,
               const std::vector<Vec3>& positions, const SurfaceMesh& mesh,
               const std::vector<double>& point_scalars, const std::string& field_name);

/// One file pair per stored level (subsampled by `stride`, keeping the level
/// numbering): u_<level>.vtk carries the moved vertex positions with the
/// transported values, utilde_<level>.vtk the fixed mesh with the same values.
void write_vtk_series(const SolutionTrajectory& traj, const FlowMap& flow, const SurfaceMesh& mesh,
                      const std::string& directory, int stride = 1);

} // namespace surfpde
