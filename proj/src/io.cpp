#include "thermel/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace thermel {

namespace fs = std::filesystem;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

static std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

std::string to_csv(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_field(row[i]);
        }
        out += "\r\n";
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), std::streamsize(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::array<NodeField, 3> edge_to_node_components(const EdgeField& f) {
    const Grid& g = f.grid();
    std::array<NodeField, 3> out{NodeField(g), NodeField(g), NodeField(g)};
    for (int c = 0; c < 3; ++c)
        for (int k = 0; k <= g.cells[2]; ++k)
            for (int j = 0; j <= g.cells[1]; ++j)
                for (int i = 0; i <= g.cells[0]; ++i) {
                    std::array<int, 3> p{i, j, k};
                    double sum = 0.0;
                    int cnt = 0;
                    if (p[c] > 0) {
                        std::array<int, 3> q = p;
                        q[c] -= 1;
                        sum += f.at(c, q[0], q[1], q[2]);
                        ++cnt;
                    }
                    if (p[c] < g.cells[c]) {
                        sum += f.at(c, p[0], p[1], p[2]);
                        ++cnt;
                    }
                    out[c](i, j, k) = sum / cnt;
                }
    return out;
}

std::array<NodeField, 3> face_to_node_components(const FaceField& f) {
    const Grid& g = f.grid();
    std::array<NodeField, 3> out{NodeField(g), NodeField(g), NodeField(g)};
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3;
        const int b = (c + 2) % 3;
        for (int k = 0; k <= g.cells[2]; ++k)
            for (int j = 0; j <= g.cells[1]; ++j)
                for (int i = 0; i <= g.cells[0]; ++i) {
                    std::array<int, 3> p{i, j, k};
                    double sum = 0.0;
                    int cnt = 0;
                    for (int da = -1; da <= 0; ++da)
                        for (int db = -1; db <= 0; ++db) {
                            std::array<int, 3> q = p;
                            q[a] += da;
                            q[b] += db;
                            if (q[a] < 0 || q[a] >= g.cells[a] || q[b] < 0 || q[b] >= g.cells[b])
                                continue;
                            sum += f.at(c, q[0], q[1], q[2]);
                            ++cnt;
                        }
                    out[c](i, j, k) = cnt ? sum / cnt : 0.0;
                }
    }
    return out;
}

std::string vtk_structured_points(
    const Grid& g, const std::string& title,
    const std::vector<std::pair<std::string, const NodeField*>>& scalars,
    const std::vector<std::pair<std::string, const std::array<NodeField, 3>*>>& vectors) {
    std::ostringstream os;
    os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
    os << "DIMENSIONS " << g.nodes(0) << ' ' << g.nodes(1) << ' ' << g.nodes(2) << '\n';
    os << "ORIGIN 0 0 0\n";
    os << "SPACING " << fmt_double(g.h[0]) << ' ' << fmt_double(g.h[1]) << ' '
       << fmt_double(g.h[2]) << '\n';
    os << "POINT_DATA " << g.node_count() << '\n';
    for (const auto& [name, field] : scalars) {
        os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (int k = 0; k <= g.cells[2]; ++k)
            for (int j = 0; j <= g.cells[1]; ++j)
                for (int i = 0; i <= g.cells[0]; ++i)
                    os << fmt_double((*field)(i, j, k)) << '\n';
    }
    for (const auto& [name, comps] : vectors) {
        os << "VECTORS " << name << " double\n";
        for (int k = 0; k <= g.cells[2]; ++k)
            for (int j = 0; j <= g.cells[1]; ++j)
                for (int i = 0; i <= g.cells[0]; ++i)
                    os << fmt_double((*comps)[0](i, j, k)) << ' ' << fmt_double((*comps)[1](i, j, k))
                       << ' ' << fmt_double((*comps)[2](i, j, k)) << '\n';
    }
    return os.str();
}

namespace {

void write_raw(const std::string& path, const Grid& g, const char* kind,
               const std::vector<const std::vector<double>*>& comps,
               const std::vector<std::array<int, 3>>& dims) {
    static_assert(sizeof(double) == 8);
    if constexpr (std::endian::native != std::endian::little)
        throw std::runtime_error("raw dumps require a little-endian host");

    std::string payload;
    std::vector<std::size_t> offsets;
    for (const auto* c : comps) {
        offsets.push_back(payload.size());
        std::size_t bytes = c->size() * sizeof(double);
        std::size_t at = payload.size();
        payload.resize(at + bytes);
        std::memcpy(payload.data() + at, c->data(), bytes);
    }
    write_file_atomic(path, payload);

    std::ostringstream os;
    os << "format: little-endian float64, C order with the first index fastest\n";
    os << "kind: " << kind << '\n';
    os << "grid_cells: " << g.cells[0] << ' ' << g.cells[1] << ' ' << g.cells[2] << '\n';
    os << "grid_extent: " << fmt_double(g.extent[0]) << ' ' << fmt_double(g.extent[1]) << ' '
       << fmt_double(g.extent[2]) << '\n';
    for (std::size_t c = 0; c < comps.size(); ++c)
        os << "component " << c << ": dims " << dims[c][0] << ' ' << dims[c][1] << ' '
           << dims[c][2] << " offset_bytes " << offsets[c] << " count " << comps[c]->size()
           << '\n';
    write_file_atomic(path + ".txt", os.str());
}

}  // namespace

void write_raw_node(const std::string& path, const NodeField& f) {
    const Grid& g = f.grid();
    write_raw(path, g, "node", {&f.data()}, {{g.nodes(0), g.nodes(1), g.nodes(2)}});
}

void write_raw_edge(const std::string& path, const EdgeField& f) {
    const Grid& g = f.grid();
    write_raw(path, g, "edge", {&f.comp(0), &f.comp(1), &f.comp(2)},
              {{g.edge_dim(0, 0), g.edge_dim(0, 1), g.edge_dim(0, 2)},
               {g.edge_dim(1, 0), g.edge_dim(1, 1), g.edge_dim(1, 2)},
               {g.edge_dim(2, 0), g.edge_dim(2, 1), g.edge_dim(2, 2)}});
}

void write_raw_face(const std::string& path, const FaceField& f) {
    const Grid& g = f.grid();
    write_raw(path, g, "face", {&f.comp(0), &f.comp(1), &f.comp(2)},
              {{g.face_dim(0, 0), g.face_dim(0, 1), g.face_dim(0, 2)},
               {g.face_dim(1, 0), g.face_dim(1, 1), g.face_dim(1, 2)},
               {g.face_dim(2, 0), g.face_dim(2, 1), g.face_dim(2, 2)}});
}

}  // namespace thermel
