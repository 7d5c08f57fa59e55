#pragma once

#include "vhm/mesh.h"

#include <optional>
#include <string>
#include <vector>

namespace vhm {

inline constexpr const char* kToolVersion = "vheat 1.0.0";
inline constexpr const char* kFieldSchema = "vheat-field/1";

/// Raw mesh file contents: triangle connectivity plus either positions (OBJ)
/// or explicit edge lengths (intrinsic plain text).
struct LoadedMesh {
  std::vector<std::array<int, 3>> faces;
  std::vector<Vec3> positions;    // OBJ input
  std::vector<double> edgeLengths; // intrinsic input
  bool hasPositions() const { return !positions.empty(); }
};

/// Reads an OBJ file (triangles only) or the intrinsic plain-text format:
/// a counts line "nVertices nFaces nEdges", nFaces lines of vertex triples,
/// then nEdges edge lengths in halfedge creation order. Parse failures throw
/// Error with "path:line:" context.
LoadedMesh loadMeshFile(const std::string& path);

/// loadMeshFile followed by buildIntrinsicMesh; connectivity errors are
/// prefixed with the path.
IntrinsicMesh loadMesh(const std::string& path);

/// FNV-1a hash of the connectivity and intrinsic lengths, as 16 hex digits.
/// Stable across runs and platforms for identical meshes.
std::string meshChecksum(const IntrinsicMesh& mesh);

struct FieldRecord {
  int vertex = 0;
  double angle = 0.0;
  double magnitude = 0.0;
  std::optional<Vec3> extrinsic;
  std::optional<Vec2> uv;
};

struct FieldExport {
  std::string toolVersion = kToolVersion;
  std::string meshChecksum;
  double t = 0.0;
  double tMultiplier = 0.0;
  int degree = 1;
  bool usedIdt = true;
  std::vector<FieldRecord> records;
};

/// Deterministic writers: identical exports produce identical bytes. Numbers
/// are printed with 17 significant digits so a re-import is bit exact.
void writeFieldCsv(const FieldExport& field, const std::string& path);
void writeFieldJson(const FieldExport& field, const std::string& path);
void writeField(const FieldExport& field, const std::string& format, const std::string& path);

/// Re-reads either format produced above.
FieldExport readField(const std::string& path);

} // namespace vhm
