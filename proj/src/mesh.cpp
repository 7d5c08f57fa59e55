#include "vhm/mesh.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace vhm {

namespace {

constexpr double kPi = std::numbers::pi;

struct PairHash {
  size_t operator()(const std::pair<int, int>& p) const {
    return std::hash<long long>()((static_cast<long long>(p.first) << 32) ^
                                  static_cast<unsigned>(p.second));
  }
};

std::string edgeName(int i, int j) {
  return std::to_string(i) + "-" + std::to_string(j);
}

} // namespace

namespace detail {

double cornerFromLengths(double lA, double lB, double lOpp) {
  double c = (lA * lA + lB * lB - lOpp * lOpp) / (2.0 * lA * lB);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double heronArea(double a, double b, double c) {
  double s = 0.5 * (a + b + c);
  double rad = s * (s - a) * (s - b) * (s - c);
  return std::sqrt(std::max(rad, 0.0));
}

} // namespace detail

std::vector<int> IntrinsicMesh::outgoingHalfedges(int v) const {
  std::vector<int> out;
  int start = vertexHalfedge[v];
  int he = start;
  do {
    out.push_back(he);
    if (!isInterior(he)) break; // outgoing boundary halfedge is last
    he = ccwNextOutgoing(he);
  } while (he != start);
  return out;
}

int IntrinsicMesh::halfedgeBetween(int i, int j) const {
  int start = vertexHalfedge[i];
  int he = start;
  do {
    if (heHead(he) == j) return he;
    if (!isInterior(he)) break;
    he = ccwNextOutgoing(he);
  } while (he != start);
  return -1;
}

std::array<int, 3> IntrinsicMesh::faceVertices(int f) const {
  int h0 = faceHalfedge[f];
  int h1 = heNext[h0];
  int h2 = heNext[h1];
  return {heTail[h0], heTail[h1], heTail[h2]};
}

std::array<Vec2, 3> IntrinsicMesh::layoutFace(int f) const {
  int h0 = faceHalfedge[f];
  int h1 = heNext[h0];
  int h2 = heNext[h1];
  double l01 = edgeLength[heEdge[h0]];
  double l12 = edgeLength[heEdge[h1]];
  double l20 = edgeLength[heEdge[h2]];
  double theta0 = detail::cornerFromLengths(l01, l20, l12);
  Vec2 p0{0.0, 0.0};
  Vec2 p1{l01, 0.0};
  Vec2 p2{l20 * std::cos(theta0), l20 * std::sin(theta0)};
  return {p0, p1, p2};
}

double IntrinsicMesh::angleScale(int v) const {
  double full = vertexIsBoundary[v] ? kPi : 2.0 * kPi;
  return full / angleSum[v];
}

double IntrinsicMesh::meanEdgeLength() const {
  double s = 0.0;
  for (double l : edgeLength) s += l;
  return s / static_cast<double>(edgeLength.size());
}

double IntrinsicMesh::totalArea() const {
  double s = 0.0;
  for (double a : faceArea) s += a;
  return s;
}

namespace {

// Builds connectivity, then fills geometry from the provided edge lengths.
IntrinsicMesh buildConnectivity(const std::vector<std::array<int, 3>>& faces, int nV) {
  IntrinsicMesh m;
  if (faces.empty()) throw Error("mesh has no faces");

  int nF = static_cast<int>(faces.size());
  m.vertexHalfedge.assign(nV, -1);
  m.faceHalfedge.assign(nF, -1);

  int nInteriorHe = 3 * nF;
  m.heNext.assign(nInteriorHe, -1);
  m.heTwin.assign(nInteriorHe, -1);
  m.heTail.assign(nInteriorHe, -1);
  m.heEdge.assign(nInteriorHe, -1);
  m.heFace.assign(nInteriorHe, -1);

  std::unordered_map<std::pair<int, int>, int, PairHash> directed;
  directed.reserve(static_cast<size_t>(nInteriorHe) * 2);

  for (int f = 0; f < nF; f++) {
    const auto& fv = faces[f];
    for (int c = 0; c < 3; c++) {
      int i = fv[c];
      int j = fv[(c + 1) % 3];
      if (i < 0 || j < 0 || i >= nV || j >= nV)
        throw Error("face " + std::to_string(f) + " references vertex out of range");
      if (i == j) throw Error("face " + std::to_string(f) + " has a repeated vertex");
      int he = 3 * f + c;
      m.heTail[he] = i;
      m.heNext[he] = 3 * f + (c + 1) % 3;
      m.heFace[he] = f;
      auto ins = directed.emplace(std::make_pair(i, j), he);
      if (!ins.second)
        throw Error("non-manifold edge " + edgeName(i, j) + " (directed edge repeated)");
      if (m.vertexHalfedge[i] < 0) m.vertexHalfedge[i] = he;
    }
    m.faceHalfedge[f] = 3 * f;
  }

  // twins and edge ids
  int nE = 0;
  for (int he = 0; he < nInteriorHe; he++) {
    if (m.heEdge[he] >= 0) continue;
    int i = m.heTail[he];
    int j = m.heTail[m.heNext[he]];
    auto it = directed.find(std::make_pair(j, i));
    int e = nE++;
    m.heEdge[he] = e;
    m.edgeHalfedge.push_back(he);
    if (it != directed.end()) {
      m.heTwin[he] = it->second;
      m.heTwin[it->second] = he;
      m.heEdge[it->second] = e;
    }
  }
  m.edgeLength.assign(nE, 0.0);

  // boundary halfedges for unmatched interior halfedges
  std::unordered_map<int, int> boundaryOut; // tail vertex -> boundary halfedge
  for (int he = 0; he < nInteriorHe; he++) {
    if (m.heTwin[he] >= 0) continue;
    int i = m.heTail[he];
    int j = m.heTail[m.heNext[he]];
    int b = static_cast<int>(m.heNext.size());
    m.heNext.push_back(-1);
    m.heTwin.push_back(he);
    m.heTail.push_back(j);
    m.heEdge.push_back(m.heEdge[he]);
    m.heFace.push_back(-1);
    m.heTwin[he] = b;
    if (!boundaryOut.emplace(j, b).second)
      throw Error("non-manifold boundary at vertex " + std::to_string(j));
  }
  // chain boundary loops
  for (const auto& [v, b] : boundaryOut) {
    int head = m.heTail[m.heTwin[b]]; // head vertex of b
    auto it = boundaryOut.find(head);
    if (it == boundaryOut.end())
      throw Error("open boundary chain at vertex " + std::to_string(head));
    m.heNext[b] = it->second;
  }

  // boundary flags; the canonical outgoing halfedge of a boundary vertex is
  // the CW-most interior one (its twin is a boundary halfedge)
  m.vertexIsBoundary.assign(nV, 0);
  for (const auto& [v, b] : boundaryOut) m.vertexIsBoundary[v] = 1;
  for (int he = 0; he < nInteriorHe; he++) {
    if (m.heFace[m.heTwin[he]] < 0) m.vertexHalfedge[m.heTail[he]] = he;
  }

  for (int v = 0; v < nV; v++) {
    if (m.vertexHalfedge[v] < 0)
      throw Error("isolated vertex " + std::to_string(v));
  }

  return m;
}

// Counts outgoing halfedges per vertex directly from storage; compared with
// the fan traversal to detect non-manifold vertices (two umbrellas).
void checkVertexManifold(const IntrinsicMesh& m) {
  std::vector<int> degree(m.nVertices(), 0);
  for (int he = 0; he < m.nHalfedges(); he++) degree[m.heTail[he]]++;
  for (int v = 0; v < m.nVertices(); v++) {
    int visited = static_cast<int>(m.outgoingHalfedges(v).size());
    if (visited != degree[v])
      throw Error("non-manifold vertex " + std::to_string(v) +
                  " (incident faces do not form a single fan)");
  }
}

void fillGeometry(IntrinsicMesh& m) {
  int nF = m.nFaces();
  m.cornerAngle.assign(m.nHalfedges(), 0.0);
  m.faceArea.assign(nF, 0.0);

  for (int e = 0; e < m.nEdges(); e++) {
    if (!(m.edgeLength[e] > 0.0))
      throw Error("edge " + std::to_string(e) + " has non-positive length");
  }

  for (int f = 0; f < nF; f++) {
    int h0 = m.faceHalfedge[f];
    int h1 = m.heNext[h0];
    int h2 = m.heNext[h1];
    double a = m.edgeLength[m.heEdge[h0]];
    double b = m.edgeLength[m.heEdge[h1]];
    double c = m.edgeLength[m.heEdge[h2]];
    if (a + b <= c || b + c <= a || c + a <= b)
      throw Error("face " + std::to_string(f) + " violates the triangle inequality");
    // corner at tail of each halfedge: between that halfedge and the previous edge
    m.cornerAngle[h0] = detail::cornerFromLengths(a, c, b);
    m.cornerAngle[h1] = detail::cornerFromLengths(b, a, c);
    m.cornerAngle[h2] = detail::cornerFromLengths(c, b, a);
    m.faceArea[f] = detail::heronArea(a, b, c);
  }

  int nV = m.nVertices();
  m.angleSum.assign(nV, 0.0);
  for (int he = 0; he < m.nHalfedges(); he++) {
    if (m.isInterior(he)) m.angleSum[m.heTail[he]] += m.cornerAngle[he];
  }

  // tangent-space layout: cumulative normalized angles around each vertex
  m.halfedgeAngle.assign(m.nHalfedges(), 0.0);
  for (int v = 0; v < nV; v++) {
    double scale = m.angleScale(v);
    double phi = 0.0;
    for (int he : m.outgoingHalfedges(v)) {
      m.halfedgeAngle[he] = phi;
      if (m.isInterior(he)) phi += m.cornerAngle[he] * scale;
    }
  }

  m.transportRotation.assign(m.nHalfedges(), Complex{1.0, 0.0});
  for (int he = 0; he < m.nHalfedges(); he++) {
    double rho = (m.halfedgeAngle[m.heTwin[he]] + kPi) - m.halfedgeAngle[he];
    m.transportRotation[he] = std::polar(1.0, rho);
  }
}

} // namespace

IntrinsicMesh buildIntrinsicMesh(const std::vector<std::array<int, 3>>& faces,
                                 const std::vector<Vec3>& positions) {
  IntrinsicMesh m = buildConnectivity(faces, static_cast<int>(positions.size()));
  checkVertexManifold(m);
  for (int e = 0; e < m.nEdges(); e++) {
    int he = m.edgeHalfedge[e];
    int i = m.heTail[he];
    int j = m.heHead(he);
    m.edgeLength[e] = (positions[j] - positions[i]).norm();
  }
  m.positions = positions;
  fillGeometry(m);
  return m;
}

IntrinsicMesh buildIntrinsicMesh(const std::vector<std::array<int, 3>>& faces,
                                 const std::vector<double>& edgeLengths) {
  int nV = 0;
  for (const auto& f : faces)
    for (int v : f) nV = std::max(nV, v + 1);
  IntrinsicMesh m = buildConnectivity(faces, nV);
  checkVertexManifold(m);
  if (static_cast<int>(edgeLengths.size()) != m.nEdges())
    throw Error("expected " + std::to_string(m.nEdges()) + " edge lengths, got " +
                std::to_string(edgeLengths.size()));
  m.edgeLength = edgeLengths;
  fillGeometry(m);
  return m;
}

TangentVector transportAlongEdge(const IntrinsicMesh& mesh, const TangentVector& v, int edge) {
  int he = mesh.edgeHalfedge[edge];
  int i = mesh.heTail[he];
  int j = mesh.heHead(he);
  if (v.basis == j) {
    he = mesh.heTwin[he];
    std::swap(i, j);
  } else if (v.basis != i) {
    throw Error("tangent vector based at vertex " + std::to_string(v.basis) +
                " is not incident to edge " + std::to_string(edge));
  }
  return TangentVector{mesh.transportRotation[he] * v.value, j};
}

Vec3 vertexNormal(const IntrinsicMesh& mesh, int vertex) {
  if (!mesh.hasPositions()) throw Error("no embedding available");
  Vec3 n = Vec3::Zero();
  for (int he : mesh.outgoingHalfedges(vertex)) {
    if (!mesh.isInterior(he)) continue;
    Vec3 a = mesh.positions[mesh.heHead(he)] - mesh.positions[vertex];
    Vec3 b = mesh.positions[mesh.heHead(mesh.heTwin[mesh.hePrev(he)])] -
             mesh.positions[vertex];
    // b is the next outgoing edge direction; weight by the corner angle
    n += mesh.cornerAngle[he] * a.cross(b).normalized();
  }
  double len = n.norm();
  if (len == 0.0) throw Error("degenerate normal at vertex " + std::to_string(vertex));
  return n / len;
}

namespace {

// Raw (extrinsic, unnormalized) angles of the outgoing edges of v in the
// tangent plane spanned by (e1, e2), plus the matching polar angles.
struct WedgeTable {
  std::vector<double> raw;   // monotone, raw[0] == 0, closes at rawTotal
  std::vector<double> polar; // same size; closes at 2*pi (interior)
  double rawTotal = 0.0;
  double polarTotal = 0.0;
};

WedgeTable wedgeTable(const IntrinsicMesh& mesh, int v, const Vec3& e1, const Vec3& e2) {
  WedgeTable t;
  double prev = 0.0;
  bool first = true;
  for (int he : mesh.outgoingHalfedges(v)) {
    int j = mesh.heHead(he);
    Vec3 d = mesh.positions[j] - mesh.positions[v];
    double raw = std::atan2(d.dot(e2), d.dot(e1));
    if (first) {
      prev = raw;
      first = false;
    }
    // unwrap monotonically
    while (raw < prev - 1e-12) raw += 2.0 * kPi;
    t.raw.push_back(raw);
    t.polar.push_back(mesh.halfedgeAngle[he]);
    prev = raw;
  }
  // close the fan; at boundary vertices the leftover raw angle is the virtual
  // exterior wedge, which maps onto the unused normalized range [pi, 2 pi]
  t.rawTotal = 2.0 * kPi;
  t.polarTotal = 2.0 * kPi;
  t.raw.push_back(t.raw.front() + 2.0 * kPi);
  t.polar.push_back(2.0 * kPi);
  return t;
}

} // namespace

TangentVector extrinsicToTangent(const IntrinsicMesh& mesh, int vertex, const Vec3& v) {
  if (!mesh.hasPositions()) throw Error("no embedding available");
  Vec3 n = vertexNormal(mesh, vertex);
  int he0 = mesh.vertexHalfedge[vertex];
  Vec3 d0 = mesh.positions[mesh.heHead(he0)] - mesh.positions[vertex];
  Vec3 e1 = (d0 - d0.dot(n) * n).normalized();
  Vec3 e2 = n.cross(e1);

  Vec3 vt = v - v.dot(n) * n;
  double mag = vt.norm();
  if (mag == 0.0) return TangentVector{Complex{0.0, 0.0}, vertex};

  WedgeTable t = wedgeTable(mesh, vertex, e1, e2);
  double raw = std::atan2(vt.dot(e2), vt.dot(e1));
  while (raw < t.raw.front()) raw += 2.0 * kPi;
  while (raw >= t.raw.front() + t.rawTotal) raw -= 2.0 * kPi;

  // piecewise-linear map from raw wedge angles to normalized polar angles
  double phi = t.polar.back();
  for (size_t a = 0; a + 1 < t.raw.size(); a++) {
    if (raw <= t.raw[a + 1] + 1e-15) {
      double span = t.raw[a + 1] - t.raw[a];
      double frac = span > 0.0 ? (raw - t.raw[a]) / span : 0.0;
      phi = t.polar[a] + frac * (t.polar[a + 1] - t.polar[a]);
      break;
    }
  }
  return TangentVector{std::polar(mag, phi), vertex};
}

Vec3 tangentToExtrinsic(const IntrinsicMesh& mesh, const TangentVector& v) {
  if (!mesh.hasPositions()) throw Error("no embedding available");
  int vertex = v.basis;
  Vec3 n = vertexNormal(mesh, vertex);
  int he0 = mesh.vertexHalfedge[vertex];
  Vec3 d0 = mesh.positions[mesh.heHead(he0)] - mesh.positions[vertex];
  Vec3 e1 = (d0 - d0.dot(n) * n).normalized();
  Vec3 e2 = n.cross(e1);

  double mag = std::abs(v.value);
  if (mag == 0.0) return Vec3::Zero();
  double phi = std::arg(v.value);
  WedgeTable t = wedgeTable(mesh, vertex, e1, e2);
  while (phi < 0.0) phi += 2.0 * kPi;
  while (phi >= t.polarTotal && t.polarTotal > 0.0) phi -= 2.0 * kPi;
  if (phi < 0.0) phi = 0.0;

  double raw = t.raw.back();
  for (size_t a = 0; a + 1 < t.polar.size(); a++) {
    if (phi <= t.polar[a + 1] + 1e-15) {
      double span = t.polar[a + 1] - t.polar[a];
      double frac = span > 0.0 ? (phi - t.polar[a]) / span : 0.0;
      raw = t.raw[a] + frac * (t.raw[a + 1] - t.raw[a]);
      break;
    }
  }
  return mag * (std::cos(raw) * e1 + std::sin(raw) * e2);
}

double cornerAngleAt(const IntrinsicMesh& mesh, int f, int v) {
  int he = mesh.faceHalfedge[f];
  for (int c = 0; c < 3; c++) {
    if (mesh.heTail[he] == v) return mesh.cornerAngle[he];
    he = mesh.heNext[he];
  }
  throw Error("vertex " + std::to_string(v) + " is not a corner of face " + std::to_string(f));
}

Vec3 surfacePointPosition(const IntrinsicMesh& mesh, const SurfacePoint& p) {
  if (!mesh.hasPositions()) throw Error("no embedding available");
  if (p.isVertex()) return mesh.positions[p.element];
  auto fv = mesh.faceVertices(p.element);
  return p.baryCoords[0] * mesh.positions[fv[0]] + p.baryCoords[1] * mesh.positions[fv[1]] +
         p.baryCoords[2] * mesh.positions[fv[2]];
}

} // namespace vhm
