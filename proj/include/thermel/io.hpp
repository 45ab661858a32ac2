#pragma once

#include <string>
#include <vector>

#include "thermel/grid.hpp"

namespace thermel {

/// Shortest round-trip decimal formatting of a double (%.17g).
std::string fmt_double(double v);

/// RFC-4180 serialization: fields containing commas, quotes or newlines are
/// quoted with doubled inner quotes; records end in CRLF.
std::string to_csv(const std::vector<std::vector<std::string>>& rows);

/// Write content to path via a temporary file in the same directory followed
/// by an atomic rename.  Creates parent directories as needed.
void write_file_atomic(const std::string& path, const std::string& content);

/// Per-component arithmetic average of edge samples to the nodes (for
/// visualization only; the staggered data is what the solver uses).
std::array<NodeField, 3> edge_to_node_components(const EdgeField& f);
/// Same for face samples.
std::array<NodeField, 3> face_to_node_components(const FaceField& f);

/// VTK legacy STRUCTURED_POINTS ASCII dataset with the given node scalars and
/// node-averaged vectors.
std::string vtk_structured_points(const Grid& g, const std::string& title,
                                  const std::vector<std::pair<std::string, const NodeField*>>& scalars,
                                  const std::vector<std::pair<std::string, const std::array<NodeField, 3>*>>& vectors);

/// Raw staggered dump: little-endian 64-bit reals at `path`, one component
/// array after another, plus a text sidecar `path + ".txt"` giving the grid,
/// the component shapes and byte offsets.  Rejects big-endian hosts.
void write_raw_node(const std::string& path, const NodeField& f);
void write_raw_edge(const std::string& path, const EdgeField& f);
void write_raw_face(const std::string& path, const FaceField& f);

}  // namespace thermel
