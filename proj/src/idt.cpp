#include "vhm/idt.h"

#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <string>

namespace vhm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDelaunayTol = 1e-10;

double wrapAngle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

// The six halfedges and four vertices of the quad around an interior edge.
// Faces are ijk = (he1=i->j, he2=j->k, he3=k->i) and jil = (he4=j->i,
// he5=i->l, he6=l->j).
struct Quad {
  int he1, he2, he3, he4, he5, he6;
  int i, j, k, l;
};

Quad quadAround(const IntrinsicMesh& m, int edge) {
  Quad q;
  q.he1 = m.edgeHalfedge[edge];
  q.he4 = m.heTwin[q.he1];
  q.he2 = m.heNext[q.he1];
  q.he3 = m.heNext[q.he2];
  q.he5 = m.heNext[q.he4];
  q.he6 = m.heNext[q.he5];
  q.i = m.heTail[q.he1];
  q.j = m.heTail[q.he4];
  q.k = m.heTail[q.he3];
  q.l = m.heTail[q.he6];
  return q;
}

bool edgeIsInterior(const IntrinsicMesh& m, int edge) {
  int he = m.edgeHalfedge[edge];
  return m.isInterior(he) && m.isInterior(m.heTwin[he]);
}

} // namespace

bool edgeIsDelaunay(const IntrinsicMesh& mesh, int edge) {
  if (!edgeIsInterior(mesh, edge)) return true;
  int he = mesh.edgeHalfedge[edge];
  double sum = mesh.cornerAngle[mesh.hePrev(he)] +
               mesh.cornerAngle[mesh.hePrev(mesh.heTwin[he])];
  return sum <= kPi + kDelaunayTol;
}

bool edgeIsFlippable(const IntrinsicMesh& mesh, int edge) {
  if (!edgeIsInterior(mesh, edge)) return false;
  Quad q = quadAround(mesh, edge);
  if (q.k == q.l) return false;
  double atI = mesh.cornerAngle[q.he1] + mesh.cornerAngle[q.he5];
  double atJ = mesh.cornerAngle[q.he2] + mesh.cornerAngle[q.he4];
  if (atI >= kPi - 1e-12 || atJ >= kPi - 1e-12) return false;
  // unfolded diagonal and the two new faces' triangle inequalities
  double lIK = mesh.edgeLength[mesh.heEdge[q.he3]];
  double lIL = mesh.edgeLength[mesh.heEdge[q.he5]];
  double lJK = mesh.edgeLength[mesh.heEdge[q.he2]];
  double lJL = mesh.edgeLength[mesh.heEdge[q.he6]];
  double lKL = std::sqrt(std::max(
      lIK * lIK + lIL * lIL - 2.0 * lIK * lIL * std::cos(atI), 0.0));
  auto valid = [](double a, double b, double c) {
    return a + b > c && b + c > a && c + a > b;
  };
  return lKL > 0.0 && valid(lIL, lKL, lIK) && valid(lJK, lKL, lJL);
}

void flipEdge(IntrinsicMesh& mesh, int edge) {
  if (!edgeIsInterior(mesh, edge))
    throw Error("cannot flip boundary edge " + std::to_string(edge));
  if (!edgeIsFlippable(mesh, edge))
    throw Error("edge " + std::to_string(edge) + " is unflippable");

  Quad q = quadAround(mesh, edge);
  double atI = mesh.cornerAngle[q.he1] + mesh.cornerAngle[q.he5];
  double lIK = mesh.edgeLength[mesh.heEdge[q.he3]];
  double lIL = mesh.edgeLength[mesh.heEdge[q.he5]];
  double lJK = mesh.edgeLength[mesh.heEdge[q.he2]];
  double lJL = mesh.edgeLength[mesh.heEdge[q.he6]];
  double lKL = std::sqrt(lIK * lIK + lIL * lIL - 2.0 * lIK * lIL * std::cos(atI));

  // rewire: he1 becomes l->k, he4 becomes k->l; faces (i,l,k) and (j,k,l)
  int fA = mesh.heFace[q.he1];
  int fB = mesh.heFace[q.he4];
  mesh.heTail[q.he1] = q.l;
  mesh.heTail[q.he4] = q.k;
  mesh.edgeLength[edge] = lKL;

  mesh.heNext[q.he5] = q.he1;
  mesh.heNext[q.he1] = q.he3;
  mesh.heNext[q.he3] = q.he5;
  mesh.heFace[q.he5] = fA;
  mesh.heFace[q.he1] = fA;
  mesh.heFace[q.he3] = fA;
  mesh.faceHalfedge[fA] = q.he5;

  mesh.heNext[q.he2] = q.he4;
  mesh.heNext[q.he4] = q.he6;
  mesh.heNext[q.he6] = q.he2;
  mesh.heFace[q.he2] = fB;
  mesh.heFace[q.he4] = fB;
  mesh.heFace[q.he6] = fB;
  mesh.faceHalfedge[fB] = q.he2;

  if (mesh.vertexHalfedge[q.i] == q.he1) mesh.vertexHalfedge[q.i] = q.he5;
  if (mesh.vertexHalfedge[q.j] == q.he4) mesh.vertexHalfedge[q.j] = q.he2;

  // geometry of the two new faces
  mesh.cornerAngle[q.he5] = detail::cornerFromLengths(lIL, lIK, lKL);
  mesh.cornerAngle[q.he1] = detail::cornerFromLengths(lKL, lIL, lIK);
  mesh.cornerAngle[q.he3] = detail::cornerFromLengths(lIK, lKL, lIL);
  mesh.faceArea[fA] = detail::heronArea(lIL, lKL, lIK);

  mesh.cornerAngle[q.he2] = detail::cornerFromLengths(lJK, lJL, lKL);
  mesh.cornerAngle[q.he4] = detail::cornerFromLengths(lKL, lJK, lJL);
  mesh.cornerAngle[q.he6] = detail::cornerFromLengths(lJL, lKL, lJK);
  mesh.faceArea[fB] = detail::heronArea(lJK, lKL, lJL);

  // lay out the new diagonal in the untouched vertex frames at l and k
  mesh.halfedgeAngle[q.he1] =
      wrapAngle(mesh.halfedgeAngle[q.he6] +
                mesh.angleScale(q.l) * mesh.cornerAngle[q.he6]);
  mesh.halfedgeAngle[q.he4] =
      wrapAngle(mesh.halfedgeAngle[q.he3] +
                mesh.angleScale(q.k) * mesh.cornerAngle[q.he3]);
  double rho = (mesh.halfedgeAngle[q.he4] + kPi) - mesh.halfedgeAngle[q.he1];
  mesh.transportRotation[q.he1] = std::polar(1.0, rho);
  mesh.transportRotation[q.he4] = std::polar(1.0, -rho);
}

DelaunayResult toIntrinsicDelaunay(const IntrinsicMesh& mesh) {
  DelaunayResult res;
  res.mesh = mesh;
  res.mesh.positions.clear();
  res.vertexCorrespondence.resize(mesh.nVertices());
  std::iota(res.vertexCorrespondence.begin(), res.vertexCorrespondence.end(), 0);

  IntrinsicMesh& m = res.mesh;
  std::deque<int> queue;
  std::vector<char> inQueue(m.nEdges(), 0);
  auto enqueue = [&](int e) {
    if (!inQueue[e]) {
      queue.push_back(e);
      inQueue[e] = 1;
    }
  };
  for (int e = 0; e < m.nEdges(); e++) {
    if (!edgeIsDelaunay(m, e)) enqueue(e);
  }

  int deferred = 0;
  while (!queue.empty()) {
    if (deferred > static_cast<int>(queue.size())) {
      std::string stuck;
      for (int e : queue) stuck += (stuck.empty() ? "" : ", ") + std::to_string(e);
      throw Error("intrinsic Delaunay flipping stalled on edges " + stuck);
    }
    int e = queue.front();
    queue.pop_front();
    inQueue[e] = 0;
    if (edgeIsDelaunay(m, e)) {
      deferred = 0;
      continue;
    }
    if (!edgeIsFlippable(m, e)) {
      enqueue(e);
      deferred++;
      continue;
    }
    flipEdge(m, e);
    res.flipCount++;
    deferred = 0;
    Quad q = quadAround(m, e);
    enqueue(m.heEdge[q.he2]);
    enqueue(m.heEdge[q.he3]);
    enqueue(m.heEdge[q.he5]);
    enqueue(m.heEdge[q.he6]);
  }
  return res;
}

} // namespace vhm
