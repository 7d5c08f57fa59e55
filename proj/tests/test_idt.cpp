#include "vhm/idt.h"
#include "vhm/meshgen.h"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace vhm;

namespace {

constexpr double kPi = std::numbers::pi;

IntrinsicMesh unitSquare() {
  std::vector<std::array<int, 3>> faces{{0, 1, 2}, {0, 2, 3}};
  std::vector<Vec3> pos{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{1, 1, 0}, Vec3{0, 1, 0}};
  return buildIntrinsicMesh(faces, pos);
}

int diagonalEdge(const IntrinsicMesh& m) {
  for (int e = 0; e < m.nEdges(); e++) {
    int he = m.edgeHalfedge[e];
    if (m.isInterior(he) && m.isInterior(m.heTwin[he])) return e;
  }
  return -1;
}

// every vertex frame stays internally consistent: walking CCW around the
// fan advances phi by the normalized corner angle
void checkFrameConsistency(const IntrinsicMesh& m, double tol) {
  for (int v = 0; v < m.nVertices(); v++) {
    double scale = m.angleScale(v);
    for (int he : m.outgoingHalfedges(v)) {
      if (!m.isInterior(he)) continue;
      int nxt = m.ccwNextOutgoing(he);
      double expect = m.halfedgeAngle[he] + scale * m.cornerAngle[he];
      double diff = std::remainder(m.halfedgeAngle[nxt] - expect, 2 * kPi);
      CHECK(std::abs(diff) < tol);
    }
  }
}

} // namespace

TEST_CASE("flipping the square diagonal yields the other sqrt(2) diagonal") {
  IntrinsicMesh m = unitSquare();
  int e = diagonalEdge(m);
  REQUIRE(e >= 0);
  int he = m.edgeHalfedge[e];
  CHECK(((m.heTail[he] == 0 && m.heHead(he) == 2) ||
         (m.heTail[he] == 2 && m.heHead(he) == 0)));

  flipEdge(m, e);
  he = m.edgeHalfedge[e];
  CHECK(((m.heTail[he] == 1 && m.heHead(he) == 3) ||
         (m.heTail[he] == 3 && m.heHead(he) == 1)));
  CHECK(m.edgeLength[e] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  checkFrameConsistency(m, 1e-10);
}

TEST_CASE("flip is an involution on edge lengths") {
  IntrinsicMesh m = buildMesh(jitteredSphere(2, 0.4, 41));
  std::vector<double> original = m.edgeLength;
  for (int e = 0; e < m.nEdges(); e += 5) {
    if (!edgeIsFlippable(m, e)) continue;
    flipEdge(m, e);
    if (!edgeIsFlippable(m, e)) continue;
    flipEdge(m, e);
    CHECK(m.edgeLength[e] == doctest::Approx(original[e]).epsilon(1e-10));
  }
}

TEST_CASE("flips preserve per-vertex angle sums and area") {
  IntrinsicMesh m = buildMesh(jitteredSphere(2, 0.4, 13));
  std::vector<double> theta(m.nVertices(), 0.0);
  for (int he = 0; he < m.nHalfedges(); he++)
    if (m.isInterior(he)) theta[m.heTail[he]] += m.cornerAngle[he];
  double area = m.totalArea();

  int done = 0;
  for (int e = 0; e < m.nEdges() && done < 40; e++) {
    if (!edgeIsFlippable(m, e)) continue;
    flipEdge(m, e);
    done++;
  }
  REQUIRE(done > 0);
  CHECK(m.totalArea() == doctest::Approx(area).epsilon(1e-10));
  std::vector<double> after(m.nVertices(), 0.0);
  for (int he = 0; he < m.nHalfedges(); he++)
    if (m.isInterior(he)) after[m.heTail[he]] += m.cornerAngle[he];
  for (int v = 0; v < m.nVertices(); v++)
    CHECK(after[v] == doctest::Approx(theta[v]).epsilon(1e-10));
}

TEST_CASE("boundary and degenerate edges refuse to flip") {
  IntrinsicMesh m = buildMesh(planarGrid(3));
  int boundary = -1;
  for (int e = 0; e < m.nEdges(); e++) {
    int he = m.edgeHalfedge[e];
    if (!m.isInterior(he) || !m.isInterior(m.heTwin[he])) {
      boundary = e;
      break;
    }
  }
  REQUIRE(boundary >= 0);
  CHECK_THROWS_AS(flipEdge(m, boundary), Error);
}

TEST_CASE("already-Delaunay meshes are fixed points") {
  for (auto data : {planarGrid(4), icosphere(2)}) {
    IntrinsicMesh m = buildMesh(data);
    DelaunayResult r = toIntrinsicDelaunay(m);
    CHECK(r.flipCount == 0);
    REQUIRE(r.mesh.nEdges() == m.nEdges());
    for (int e = 0; e < m.nEdges(); e++)
      CHECK(r.mesh.edgeLength[e] == m.edgeLength[e]);
    for (int he = 0; he < m.nHalfedges(); he++)
      CHECK(r.mesh.heNext[he] == m.heNext[he]);
  }
}

TEST_CASE("thin strip becomes Delaunay with area and angle sums preserved") {
  IntrinsicMesh m = buildMesh(thinStrip(12, 6.0));
  bool anyBad = false;
  for (int e = 0; e < m.nEdges(); e++) anyBad = anyBad || !edgeIsDelaunay(m, e);
  REQUIRE(anyBad);

  DelaunayResult r = toIntrinsicDelaunay(m);
  CHECK(r.flipCount > 0);
  for (int e = 0; e < r.mesh.nEdges(); e++) {
    CHECK(edgeIsDelaunay(r.mesh, e));
    int he = r.mesh.edgeHalfedge[e];
    if (!r.mesh.isInterior(he) || !r.mesh.isInterior(r.mesh.heTwin[he])) continue;
    double w = 1.0 / std::tan(r.mesh.cornerAngle[r.mesh.hePrev(he)]) +
               1.0 / std::tan(r.mesh.cornerAngle[r.mesh.hePrev(r.mesh.heTwin[he])]);
    CHECK(w >= -1e-12);
  }
  CHECK(r.mesh.totalArea() == doctest::Approx(m.totalArea()).epsilon(1e-9));
  for (int v = 0; v < m.nVertices(); v++) {
    CHECK(r.vertexCorrespondence[v] == v);
    CHECK(r.mesh.angleSum[v] == doctest::Approx(m.angleSum[v]).epsilon(1e-9));
  }
}

TEST_CASE("Delaunay result keeps valid tangent layout and rotations") {
  IntrinsicMesh m = buildMesh(jitteredSphere(2, 0.5, 77));
  DelaunayResult r = toIntrinsicDelaunay(m);
  CHECK(r.flipCount > 0);
  checkFrameConsistency(r.mesh, 1e-9);
  for (int he = 0; he < r.mesh.nHalfedges(); he++) {
    CHECK(std::abs(std::abs(r.mesh.transportRotation[he]) - 1.0) < 1e-12);
    Complex prod = r.mesh.transportRotation[he] *
                   r.mesh.transportRotation[r.mesh.heTwin[he]];
    CHECK(std::abs(prod - Complex{1.0, 0.0}) < 1e-10);
  }
}

TEST_CASE("flat mesh stays flat through iDT: face loops have no holonomy") {
  IntrinsicMesh m = buildMesh(jitteredGrid(10, 0.25, 9));
  for (int v = 0; v < m.nVertices(); v++)
    if (!m.vertexIsBoundary[v])
      REQUIRE(m.angleSum[v] == doctest::Approx(2 * kPi).epsilon(1e-12));
  DelaunayResult r = toIntrinsicDelaunay(m);
  CHECK(r.flipCount > 0);
  const IntrinsicMesh& d = r.mesh;
  for (int f = 0; f < d.nFaces(); f++) {
    auto fv = d.faceVertices(f);
    bool interior = !d.vertexIsBoundary[fv[0]] && !d.vertexIsBoundary[fv[1]] &&
                    !d.vertexIsBoundary[fv[2]];
    if (!interior) continue;
    Complex loop{1.0, 0.0};
    int he = d.faceHalfedge[f];
    for (int c = 0; c < 3; c++) {
      loop *= d.transportRotation[he];
      he = d.heNext[he];
    }
    CHECK(std::abs(loop - Complex{1.0, 0.0}) < 1e-9);
  }
}

TEST_CASE("flipped geometry matches a fresh rebuild from the same lengths") {
  IntrinsicMesh m = buildMesh(thinStrip(8, 5.0));
  DelaunayResult r = toIntrinsicDelaunay(m);
  const IntrinsicMesh& d = r.mesh;

  std::vector<std::array<int, 3>> faces;
  for (int f = 0; f < d.nFaces(); f++) faces.push_back(d.faceVertices(f));
  std::vector<double> lengths(d.nEdges());
  // rebuild indexes edges in face-scan order; map through vertex pairs
  IntrinsicMesh fresh = buildIntrinsicMesh(faces, std::vector<double>(d.nEdges(), 1.0));
  for (int e = 0; e < d.nEdges(); e++) {
    int he = d.edgeHalfedge[e];
    int fe = fresh.heEdge[fresh.halfedgeBetween(d.heTail[he], d.heHead(he))];
    lengths[fe] = d.edgeLength[e];
  }
  fresh = buildIntrinsicMesh(faces, lengths);

  CHECK(fresh.totalArea() == doctest::Approx(d.totalArea()).epsilon(1e-12));
  for (int v = 0; v < d.nVertices(); v++) {
    double sum = 0.0;
    for (int he : d.outgoingHalfedges(v))
      if (d.isInterior(he)) sum += d.cornerAngle[he];
    CHECK(sum == doctest::Approx(fresh.angleSum[v]).epsilon(1e-10));
  }
}
