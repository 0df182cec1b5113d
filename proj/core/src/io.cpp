#include "surfpde/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <system_error>

#include "surfpde/errors.hpp"

namespace surfpde {

std::string format_double(double v, int precision) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
    if (ec != std::errc()) throw NumericalError("format_double: conversion failed");
    return std::string(buf, p);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("io: cannot open '" + path + "' for writing");
    return out;
}

void write_point(std::ostream& out, const Vec3& p, int precision) {
    out << format_double(p.x, precision) << ' ' << format_double(p.y, precision) << ' '
        << format_double(p.z, precision);
}

} // namespace

void write_off(const SurfaceMesh& mesh, std::ostream& out) {
    if (mesh.dim_surface != 2)
        throw ValidationError("off: writer handles triangle meshes only; use write_curve");
    out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_elements() << ' '
        << count_edges(mesh) << '\n';
    for (const auto& v : mesh.vertices) {
        write_point(out, v, 17);
        out << '\n';
    }
    for (const auto& el : mesh.elements)
        out << "3 " << el[0] << ' ' << el[1] << ' ' << el[2] << '\n';
}

void write_off_file(const SurfaceMesh& mesh, const std::string& path) {
    auto out = open_out(path);
    write_off(mesh, out);
}

void write_curve(const SurfaceMesh& mesh, std::ostream& out) {
    if (mesh.dim_surface != 1) throw ValidationError("curve: writer handles curves only");
    const bool closed = mesh.boundary_vertices.empty();
    // reconstruct path order by walking the segments (refinement appends
    // midpoints out of order)
    std::vector<int> succ(mesh.num_vertices(), -1);
    for (const auto& el : mesh.elements) succ[el[0]] = el[1];
    int start = 0;
    if (!closed) {
        std::vector<char> has_pred(mesh.num_vertices(), 0);
        for (const auto& el : mesh.elements) has_pred[el[1]] = 1;
        for (int v = 0; v < mesh.num_vertices(); ++v)
            if (succ[v] >= 0 && !has_pred[v]) start = v;
    }
    out << "CURVE " << mesh.num_vertices() << ' ' << (closed ? "closed" : "open") << '\n';
    int v = start;
    for (int i = 0; i < mesh.num_vertices(); ++i) {
        if (v < 0) throw ValidationError("curve: mesh is not a single path");
        out << format_double(mesh.vertices[v].x, 17) << ' '
            << format_double(mesh.vertices[v].y, 17) << '\n';
        v = succ[v];
    }
}

void write_curve_file(const SurfaceMesh& mesh, const std::string& path) {
    auto out = open_out(path);
    write_curve(mesh, out);
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
    auto out = open_out(path);
    out << header << '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    if (!out) throw ValidationError("io: write failed for '" + path + "'");
}

void write_vtk(const std::string& path, const std::string& title,
               const std::vector<Vec3>& positions, const SurfaceMesh& mesh,
               const std::vector<double>& point_scalars, const std::string& field_name) {
    if (static_cast<int>(positions.size()) != mesh.num_vertices() ||
        static_cast<int>(point_scalars.size()) != mesh.num_vertices())
        throw ValidationError("vtk: positions/scalars size does not match mesh");
    auto out = open_out(path);
    const int nv = mesh.num_vertices();
    const int ne = mesh.num_elements();
    const int k = mesh.verts_per_element();

    out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << nv << " double\n";
    for (const auto& p : positions) {
        write_point(out, p, 17);
        out << '\n';
    }
    out << "CELLS " << ne << ' ' << ne * (k + 1) << '\n';
    for (const auto& el : mesh.elements) {
        out << k;
        for (int i = 0; i < k; ++i) out << ' ' << el[i];
        out << '\n';
    }
    out << "CELL_TYPES " << ne << '\n';
    const int cell_type = mesh.dim_surface == 2 ? 5 : 3; // VTK_TRIANGLE / VTK_LINE
    for (int e = 0; e < ne; ++e) out << cell_type << '\n';
    out << "POINT_DATA " << nv << '\n';
    out << "SCALARS " << field_name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : point_scalars) out << format_double(v, 17) << '\n';
    if (!out) throw ValidationError("io: write failed for '" + path + "'");
}

void write_vtk_series(const SolutionTrajectory& traj, const FlowMap& flow, const SurfaceMesh& mesh,
                      const std::string& directory, int stride) {
    if (stride < 1) throw ValidationError("vtk: stride must be >= 1");
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    const int levels = traj.num_levels();
    char name[32];
    for (int level = 0; level < levels; level += stride) {
        const double t = traj.times[level];
        const auto snap = pushforward_snapshot(traj, flow, mesh, t);
        std::snprintf(name, sizeof(name), "u_%04d.vtk", level);
        write_vtk(directory + "/" + name, "moved-surface solution t=" + format_double(t),
                  snap.positions, mesh, snap.values, "u");
        std::snprintf(name, sizeof(name), "utilde_%04d.vtk", level);
        write_vtk(directory + "/" + name, "fixed-surface solution t=" + format_double(t),
                  mesh.vertices, mesh, snap.values, "u");
    }
}

} // namespace surfpde
