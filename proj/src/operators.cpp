#include "vhm/operators.h"

#include <cmath>
#include <vector>

namespace vhm {

namespace {

double cot(double angle) { return 1.0 / std::tan(angle); }

} // namespace

double edgeCotanWeight(const IntrinsicMesh& mesh, int edge) {
  double w = 0.0;
  int he = mesh.edgeHalfedge[edge];
  if (mesh.isInterior(he)) w += cot(mesh.cornerAngle[mesh.hePrev(he)]);
  int tw = mesh.heTwin[he];
  if (mesh.isInterior(tw)) w += cot(mesh.cornerAngle[mesh.hePrev(tw)]);
  return w;
}

SparseReal assembleCotanLaplacian(const IntrinsicMesh& mesh) {
  int n = mesh.nVertices();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(mesh.nFaces()) * 9);
  for (int f = 0; f < mesh.nFaces(); f++) {
    int he = mesh.faceHalfedge[f];
    for (int c = 0; c < 3; c++) {
      // the corner at the tail of prev(he) is opposite the edge of he
      double w = cot(mesh.cornerAngle[mesh.hePrev(he)]);
      int i = mesh.heTail[he];
      int j = mesh.heHead(he);
      trip.emplace_back(i, i, w);
      trip.emplace_back(j, j, w);
      trip.emplace_back(i, j, -w);
      trip.emplace_back(j, i, -w);
      he = mesh.heNext[he];
    }
  }
  SparseReal L(n, n);
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

SparseComplex assembleConnectionLaplacian(const IntrinsicMesh& mesh, int degree) {
  if (degree < 1) throw Error("connection Laplacian degree must be at least 1");
  int n = mesh.nVertices();
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<size_t>(mesh.nFaces()) * 9);
  for (int f = 0; f < mesh.nFaces(); f++) {
    int he = mesh.faceHalfedge[f];
    for (int c = 0; c < 3; c++) {
      double w = cot(mesh.cornerAngle[mesh.hePrev(he)]);
      int i = mesh.heTail[he];
      int j = mesh.heHead(he);
      // entry (i, j) applies to the value at j, expressed in i's frame:
      // multiply by the rotation from j's frame into i's
      Complex rJI = std::pow(mesh.transportRotation[mesh.heTwin[he]],
                             static_cast<double>(degree));
      trip.emplace_back(i, i, Complex{w, 0.0});
      trip.emplace_back(j, j, Complex{w, 0.0});
      trip.emplace_back(i, j, -w * rJI);
      trip.emplace_back(j, i, -w * std::conj(rJI));
      he = mesh.heNext[he];
    }
  }
  SparseComplex L(n, n);
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

Vec assembleMassMatrix(const IntrinsicMesh& mesh) {
  Vec m = Vec::Zero(mesh.nVertices());
  for (int f = 0; f < mesh.nFaces(); f++) {
    double share = mesh.faceArea[f] / 3.0;
    for (int v : mesh.faceVertices(f)) m[v] += share;
  }
  return m;
}

Vec divergence(const IntrinsicMesh& mesh, const std::vector<TangentVector>& field) {
  if (static_cast<int>(field.size()) != mesh.nVertices())
    throw Error("divergence: field size does not match vertex count");
  for (int v = 0; v < mesh.nVertices(); v++) {
    if (field[v].basis != v)
      throw Error("divergence: field entry " + std::to_string(v) +
                  " is based at vertex " + std::to_string(field[v].basis));
  }
  Vec div = Vec::Zero(mesh.nVertices());
  for (int e = 0; e < mesh.nEdges(); e++) {
    int he = mesh.edgeHalfedge[e];
    int i = mesh.heTail[he];
    int j = mesh.heHead(he);
    double w = edgeCotanWeight(mesh, e);
    double l = mesh.edgeLength[e];
    Complex eIJ = std::polar(l, mesh.halfedgeAngle[he]);
    Complex eJI = std::polar(l, mesh.halfedgeAngle[mesh.heTwin[he]]);
    double rIJ = 0.5 * (std::real(std::conj(eIJ) * field[i].value) -
                        std::real(std::conj(eJI) * field[j].value));
    div[i] += w * rIJ;
    div[j] -= w * rIJ;
  }
  return div;
}

} // namespace vhm
