#include "vhm/logmap.h"

#include "vhm/operators.h"

#include <cmath>
#include <numbers>

namespace vhm {

namespace {

constexpr double kPi = std::numbers::pi;

double wrapAngle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a < -kPi) a += 2.0 * kPi;
  return a;
}

void accumulateRadialData(const IntrinsicMesh& mesh, int source, double weight,
                          CVec& rhs) {
  RadialInitialData data = radialInitialConditions(mesh, source);
  rhs[data.source] += weight * data.sourceEntry;
  for (const auto& [vertex, value] : data.neighborEntries)
    rhs[vertex] += weight * value;
}

} // namespace

RadialInitialData radialInitialConditions(const IntrinsicMesh& mesh, int source) {
  if (source < 0 || source >= mesh.nVertices())
    throw Error("source vertex " + std::to_string(source) + " out of range");

  RadialInitialData data;
  data.source = source;
  Complex center{0.0, 0.0};
  for (int he : mesh.outgoingHalfedges(source)) {
    Complex tilde{0.0, 0.0}; // in the frame with edge ij along +x
    if (mesh.isInterior(he)) {
      double a = mesh.cornerAngle[he];
      double lij = mesh.edgeLength[mesh.heEdge[he]];
      double lik = mesh.edgeLength[mesh.heEdge[mesh.hePrev(he)]];
      double area = mesh.faceArea[mesh.heFace[he]];
      tilde += lik * Complex{a * std::sin(a), std::sin(a) - a * std::cos(a)} / (4.0 * area);
      Complex centerTilde{-std::sin(a) * (lik * a + lij * std::sin(a)),
                          lij * (std::cos(a) * std::sin(a) - a) +
                              lik * (a * std::cos(a) - std::sin(a))};
      center += std::polar(1.0, mesh.halfedgeAngle[he]) * centerTilde / (4.0 * area);
    }
    int tw = mesh.heTwin[he];
    if (mesh.isInterior(tw)) {
      int heIL = mesh.heNext[tw]; // edge il of the triangle jil across ij
      double b = mesh.cornerAngle[heIL];
      double lil = mesh.edgeLength[mesh.heEdge[heIL]];
      double area = mesh.faceArea[mesh.heFace[tw]];
      tilde += lil * Complex{b * std::sin(b), b * std::cos(b) - std::sin(b)} / (4.0 * area);
    }
    // into the neighbor's frame: the direction away from the source is the
    // reversed edge, at angle phi_ji + pi
    data.neighborEntries.emplace_back(
        mesh.heHead(he), std::polar(1.0, mesh.halfedgeAngle[tw] + kPi) * tilde);
  }
  if (data.neighborEntries.empty())
    throw Error("vertex " + std::to_string(source) + " has no incident faces");
  data.sourceEntry = center;
  return data;
}

LogMapSolver::LogMapSolver(const IntrinsicMesh& mesh, double t, bool useIdt)
    : heat_(mesh, t, 1, useIdt) {
  SparseReal laplacian = assembleCotanLaplacian(heat_.solveMesh());
  poisson_ = std::make_unique<RealFactorization>(pinVertex(laplacian, 0));
}

LogMapField LogMapSolver::compute(const SurfacePoint& basepoint, Complex h0) const {
  if (std::abs(h0) == 0.0) throw Error("zero direction must be nonzero");
  const IntrinsicMesh& mesh = heat_.mesh();
  const IntrinsicMesh& solveMesh = heat_.solveMesh();
  int n = mesh.nVertices();

  CVec hRhs = CVec::Zero(n);
  CVec rRhs = CVec::Zero(n);
  std::vector<std::pair<int, double>> anchors; // vertex, barycentric weight
  if (basepoint.isVertex()) {
    int vtx = basepoint.element;
    if (vtx < 0 || vtx >= n) throw Error("basepoint vertex out of range");
    anchors.emplace_back(vtx, 1.0);
    hRhs[vtx] = h0 / std::abs(h0);
    accumulateRadialData(solveMesh, vtx, 1.0, rRhs);
  } else {
    int f = basepoint.element;
    if (f < 0 || f >= mesh.nFaces()) throw Error("basepoint face out of range");
    auto corners = mesh.faceVertices(f);
    auto chart = mesh.layoutFace(f);
    double h0Angle = std::arg(h0);
    int he = mesh.faceHalfedge[f];
    for (int c = 0; c < 3; c++) {
      double w = basepoint.baryCoords[c];
      if (w > 1e-12) {
        // rotate h0 from the face chart into the corner's polar frame using
        // the chart direction of the corner's outgoing face halfedge
        Vec2 d = chart[(c + 1) % 3] - chart[c];
        double delta = wrapAngle(h0Angle - std::atan2(d.y(), d.x()));
        double angle = mesh.halfedgeAngle[he] + mesh.angleScale(corners[c]) * delta;
        hRhs[corners[c]] += w * std::polar(1.0, angle);
        accumulateRadialData(solveMesh, corners[c], w, rRhs);
        anchors.emplace_back(corners[c], w);
      }
      he = mesh.heNext[he];
    }
    if (anchors.empty()) throw Error("basepoint barycentric coordinates are all zero");
  }

  CVec yH = heat_.diffuseVector(hRhs);
  CVec yR = heat_.diffuseVector(rRhs);

  LogMapField out;
  out.basepoint = basepoint;
  out.phi = Vec::Zero(n);
  out.H.reserve(n);
  out.R.reserve(n);
  for (int vtx = 0; vtx < n; vtx++) {
    double hLen = std::abs(yH[vtx]);
    double rLen = std::abs(yR[vtx]);
    Complex H = hLen > 0.0 ? yH[vtx] / hLen : Complex{0.0, 0.0};
    Complex R = rLen > 0.0 ? yR[vtx] / rLen : Complex{0.0, 0.0};
    if (basepoint.isVertex() && vtx == basepoint.element) R = Complex{0.0, 0.0};
    out.H.push_back(TangentVector{H, vtx});
    out.R.push_back(TangentVector{R, vtx});
    out.phi[vtx] = (R == Complex{0.0, 0.0} || H == Complex{0.0, 0.0})
                       ? 0.0
                       : std::arg(R * std::conj(H));
  }

  Vec rhs = -divergence(solveMesh, out.R);
  rhs.array() -= rhs.mean();
  rhs[0] = 0.0;
  Vec r = poisson_->solve(rhs);
  double shift = 0.0;
  for (const auto& [vtx, w] : anchors) shift += w * r[vtx];
  out.r = (r.array() - shift).cwiseMax(0.0);

  out.u = out.r.array() * out.phi.array().cos();
  out.v = out.r.array() * out.phi.array().sin();
  return out;
}

Vec2 logMapAt(const IntrinsicMesh& mesh, const LogMapField& field, const SurfacePoint& p) {
  if (p.isVertex()) {
    if (p.element < 0 || p.element >= mesh.nVertices())
      throw Error("vertex out of range");
    return Vec2{field.u[p.element], field.v[p.element]};
  }
  if (p.element < 0 || p.element >= mesh.nFaces()) throw Error("face out of range");
  auto corners = mesh.faceVertices(p.element);
  Vec2 out = Vec2::Zero();
  for (int c = 0; c < 3; c++)
    out += p.baryCoords[c] * Vec2{field.u[corners[c]], field.v[corners[c]]};
  return out;
}

} // namespace vhm
