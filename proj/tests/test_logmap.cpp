#include "vhm/logmap.h"
#include "vhm/meshgen.h"
#include "vhm/oracles.h"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

using namespace vhm;

namespace {
constexpr double kPi = std::numbers::pi;

double wrap(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a < -kPi) a += 2.0 * kPi;
  return a;
}

int vertexNearest(const IntrinsicMesh& m, const Vec3& p) {
  int best = 0;
  double bestD = (m.positions[0] - p).norm();
  for (int v = 1; v < m.nVertices(); v++) {
    double d = (m.positions[v] - p).norm();
    if (d < bestD) {
      bestD = d;
      best = v;
    }
  }
  return best;
}

// rotation carrying a vertex's polar frame into the global chart of a planar
// mesh (valid while positions are the original embedding)
double frameToGlobal(const IntrinsicMesh& m, int v) {
  int vh = m.vertexHalfedge[v];
  Vec3 d = m.positions[m.heHead(vh)] - m.positions[v];
  return std::atan2(d.y(), d.x()) - m.halfedgeAngle[vh];
}

// brute-force evaluation of the circle integrals on a planar mesh: integrate
// every hat function against the outward normals of the radius-eps circle
std::map<int, Complex> quadratureCircleData(const IntrinsicMesh& m, int src,
                                            double eps) {
  std::map<int, Complex> out;
  Vec3 P = m.positions[src];
  const int samples = 20000;
  for (int he0 : m.outgoingHalfedges(src)) {
    if (!m.isInterior(he0)) continue;
    auto vs = m.faceVertices(m.heFace[he0]);
    Vec3 q[3];
    for (int c = 0; c < 3; c++) q[c] = m.positions[vs[c]];
    int c0 = 0;
    while (vs[c0] != src) c0++;
    Vec3 e1 = q[(c0 + 1) % 3] - q[c0];
    Vec3 e2 = q[(c0 + 2) % 3] - q[c0];
    double t0 = std::atan2(e1.y(), e1.x());
    double ang = std::acos(std::clamp(e1.normalized().dot(e2.normalized()), -1.0, 1.0));
    double sgn = e1.x() * e2.y() - e1.y() * e2.x() > 0 ? 1.0 : -1.0;
    for (int s = 0; s < samples; s++) {
      double theta = t0 + sgn * ang * (s + 0.5) / samples;
      Vec3 x = P + eps * Vec3{std::cos(theta), std::sin(theta), 0.0};
      Vec3 v0 = q[1] - q[0], v1 = q[2] - q[0], v2 = x - q[0];
      double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
      double d20 = v2.dot(v0), d21 = v2.dot(v1);
      double den = d00 * d11 - d01 * d01;
      double b1 = (d11 * d20 - d01 * d21) / den;
      double b2 = (d00 * d21 - d01 * d20) / den;
      double bc[3] = {1.0 - b1 - b2, b1, b2};
      Complex n = std::polar(1.0, theta);
      for (int c = 0; c < 3; c++) out[vs[c]] += bc[c] * n * (ang / samples) / eps;
    }
  }
  return out;
}
} // namespace

TEST_CASE("circle-normal data matches closed forms on the hexagonal fan") {
  IntrinsicMesh fan = buildMesh(flatFan(6));
  RadialInitialData data = radialInitialConditions(fan, 0);
  CHECK(data.source == 0);
  CHECK(data.neighborEntries.size() == 6);
  CHECK(std::abs(data.sourceEntry) < 1e-12);
  for (const auto& [j, x] : data.neighborEntries) {
    int he = fan.halfedgeBetween(j, 0);
    Complex tilde = std::polar(1.0, -(fan.halfedgeAngle[he] + kPi)) * x;
    CHECK(tilde.real() == doctest::Approx(kPi / 3.0).epsilon(1e-12));
    CHECK(std::abs(tilde.imag()) < 1e-12);
  }
  CHECK_THROWS_AS(radialInitialConditions(fan, 99), Error);
}

TEST_CASE("circle-normal data agrees with brute-force quadrature") {
  IntrinsicMesh m = buildMesh(jitteredGrid(8, 0.35, 3));
  double h = m.meanEdgeLength();
  int src = 3 * 9 + 4;
  RadialInitialData data = radialInitialConditions(m, src);

  auto q1 = quadratureCircleData(m, src, 0.01 * h);
  auto q2 = quadratureCircleData(m, src, 0.001 * h);
  Complex srcClosed = std::polar(1.0, frameToGlobal(m, src)) * data.sourceEntry;
  CHECK(std::abs(q1[src] - srcClosed) < 1e-4 * std::abs(srcClosed));
  CHECK(std::abs(q1[src] - q2[src]) < 1e-4 * std::abs(q1[src]));
  for (const auto& [j, x] : data.neighborEntries) {
    Complex closed = std::polar(1.0, frameToGlobal(m, j)) * x;
    CHECK(std::abs(q1[j] - closed) < 1e-4 * std::abs(closed));
    CHECK(std::abs(q1[j] - q2[j]) < 1e-4 * std::abs(q1[j]));
  }
}

TEST_CASE("log map reproduces the euclidean chart on a flat disk") {
  IntrinsicMesh m = buildMesh(planarDisk(40, 1.0));
  int c = vertexNearest(m, Vec3::Zero());
  LogMapSolver solver(m, chooseTime(m));
  LogMapField field = solver.compute(SurfacePoint::vertex(c), Complex{1.0, 0.0});

  double gauge = frameToGlobal(m, c);
  double maxErr = 0.0;
  for (int v = 0; v < m.nVertices(); v++) {
    CHECK(field.r[v] >= 0.0);
    CHECK(field.u[v] == doctest::Approx(field.r[v] * std::cos(field.phi[v])).epsilon(1e-14));
    CHECK(field.v[v] == doctest::Approx(field.r[v] * std::sin(field.phi[v])).epsilon(1e-14));
    if (v == c) {
      CHECK(field.r[v] == 0.0);
      CHECK(std::abs(field.R[v].value) == 0.0);
      continue;
    }
    CHECK(std::abs(std::abs(field.H[v].value) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(field.R[v].value) - 1.0) < 1e-12);
    CHECK(field.r[v] > 0.0);
    Vec3 off = m.positions[v] - m.positions[c];
    Complex expect = std::polar(1.0, -gauge) * Complex{off.x(), off.y()};
    maxErr = std::max(maxErr, std::abs(Complex{field.u[v], field.v[v]} - expect));
  }
  CHECK(maxErr < 0.02); // of the unit disk radius, at ~10k faces
}

TEST_CASE("sphere log map converges to geodesic polar coordinates") {
  std::vector<double> rErr, phiErr;
  for (int level : {2, 3, 4}) {
    IntrinsicMesh m = buildMesh(icosphere(level));
    int c = vertexNearest(m, Vec3{0.0, 0.0, 1.0});
    double h = m.meanEdgeLength();
    LogMapSolver solver(m, h); // longer time keeps the far radial field smooth
    LogMapField field = solver.compute(SurfacePoint::vertex(c), Complex{1.0, 0.0});
    Vec3 zeroDir = tangentToExtrinsic(m, TangentVector{Complex{1.0, 0.0}, c});

    double sumR = 0.0, sumPhi = 0.0;
    int nR = 0, nPhi = 0;
    for (int v = 0; v < m.nVertices(); v++) {
      if (v == c) continue;
      double dist = oracle::sphereDistance(m.positions[c], m.positions[v]);
      if (dist > 0.9 * kPi) continue; // cut locus
      sumR += std::abs(field.r[v] - dist);
      nR++;
      if (dist < 0.3) continue;
      Vec2 lg = oracle::sphereLog(m.positions[c], m.positions[v], zeroDir);
      sumPhi += std::abs(wrap(field.phi[v] - lg[1]));
      nPhi++;
    }
    rErr.push_back(sumR / nR);
    phiErr.push_back(sumPhi / nPhi);
  }
  for (size_t k = 1; k < rErr.size(); k++) {
    CHECK(rErr[k] < 0.6 * rErr[k - 1]);
    CHECK(phiErr[k] < 0.6 * phiErr[k - 1]);
  }
  CHECK(rErr.back() < 0.05);
  CHECK(phiErr.back() < 1.5e-3);
}

TEST_CASE("rotating the zero direction shifts phi and fixes r") {
  IntrinsicMesh m = buildMesh(icosphere(3));
  int c = vertexNearest(m, Vec3{0.0, 0.0, 1.0});
  LogMapSolver solver(m, m.meanEdgeLength());
  double psi = 0.8;
  LogMapField a = solver.compute(SurfacePoint::vertex(c), Complex{1.0, 0.0});
  LogMapField b = solver.compute(SurfacePoint::vertex(c), std::polar(1.0, psi));
  for (int v = 0; v < m.nVertices(); v++) {
    CHECK(std::abs(a.r[v] - b.r[v]) < 1e-10);
    if (v == c) continue;
    CHECK(std::abs(wrap(b.phi[v] - a.phi[v] + psi)) < 1e-8);
  }
}

TEST_CASE("projected circle normals beat sampled neighbor directions") {
  IntrinsicMesh m = buildMesh(jitteredSphere(3, 0.2, 1));
  int c = vertexNearest(m, Vec3{0.0, 0.0, 1.0});
  double h = m.meanEdgeLength();
  LogMapSolver solver(m, h * h);
  LogMapField field = solver.compute(SurfacePoint::vertex(c), Complex{1.0, 0.0});

  // the naive initialization: unit outward vectors sampled at the neighbors
  int n = m.nVertices();
  CVec naiveRhs = CVec::Zero(n);
  const IntrinsicMesh& sm = solver.heat().solveMesh();
  for (int he : sm.outgoingHalfedges(c))
    naiveRhs[sm.heHead(he)] = std::polar(1.0, sm.halfedgeAngle[sm.heTwin[he]] + kPi);
  CVec yR = solver.heat().diffuseVector(naiveRhs);
  Vec naivePhi = Vec::Zero(n);
  for (int v = 0; v < n; v++) {
    if (std::abs(yR[v]) == 0.0) continue;
    naivePhi[v] = std::arg(yR[v] / std::abs(yR[v]) * std::conj(field.H[v].value));
  }

  // the exact angular coordinate depends only on longitude, so over a wide
  // annulus phi sorted by true longitude must be monotone; radius-dependent
  // anisotropy shows up as oscillation
  std::vector<std::pair<double, int>> ring;
  for (int v = 0; v < n; v++) {
    if (v == c) continue;
    double dist = oracle::sphereDistance(m.positions[c], m.positions[v]);
    if (dist < 0.3 || dist > 2.6) continue;
    ring.push_back({oracle::sphereLog(m.positions[c], m.positions[v], Vec3::UnitX())[1], v});
  }
  std::sort(ring.begin(), ring.end());
  int projected = 0, sampled = 0;
  for (size_t k = 0; k < ring.size(); k++) {
    int a = ring[k].second, b = ring[(k + 1) % ring.size()].second;
    if (wrap(field.phi[b] - field.phi[a]) < -0.05) projected++;
    if (wrap(naivePhi[b] - naivePhi[a]) < -0.05) sampled++;
  }
  CHECK(projected < 10);
  CHECK(sampled > 5 * projected);
}

TEST_CASE("face basepoints and barycentric evaluation") {
  IntrinsicMesh m = buildMesh(planarDisk(20, 1.0));
  double h = m.meanEdgeLength();
  int f = 100;
  SurfacePoint p = SurfacePoint::face(f, Vec3{0.3, 0.45, 0.25});
  Vec3 pos = surfacePointPosition(m, p);
  LogMapSolver solver(m, chooseTime(m));
  LogMapField field = solver.compute(p, Complex{1.0, 0.0});

  auto corners = m.faceVertices(f);
  Vec3 e = m.positions[corners[1]] - m.positions[corners[0]];
  double gauge = std::atan2(e.y(), e.x());
  double maxErr = 0.0;
  for (int v = 0; v < m.nVertices(); v++) {
    Vec3 off = m.positions[v] - pos;
    if (off.norm() < 3.0 * h) continue;
    Complex expect = std::polar(1.0, -gauge) * Complex{off.x(), off.y()};
    maxErr = std::max(maxErr, std::abs(Complex{field.u[v], field.v[v]} - expect));
  }
  CHECK(maxErr < 0.06);
  CHECK(logMapAt(m, field, p).norm() < 0.5 * h);

  CHECK(logMapAt(m, field, SurfacePoint::vertex(7)) ==
        Vec2{field.u[7], field.v[7]});
  Vec2 center = logMapAt(m, field, SurfacePoint::face(5, Vec3::Constant(1.0 / 3.0)));
  auto cs = m.faceVertices(5);
  Vec2 mean = (Vec2{field.u[cs[0]], field.v[cs[0]]} + Vec2{field.u[cs[1]], field.v[cs[1]]} +
               Vec2{field.u[cs[2]], field.v[cs[2]]}) / 3.0;
  CHECK((center - mean).norm() < 1e-14);
}

TEST_CASE("log map input validation") {
  IntrinsicMesh m = buildMesh(planarGrid(3));
  LogMapSolver solver(m, chooseTime(m));
  CHECK_THROWS_AS(solver.compute(SurfacePoint::vertex(0), Complex{0.0, 0.0}), Error);
  CHECK_THROWS_AS(solver.compute(SurfacePoint::vertex(-1), Complex{1.0, 0.0}), Error);
  CHECK_THROWS_AS(solver.compute(SurfacePoint::face(999, Vec3{1, 0, 0}), Complex{1.0, 0.0}),
                  Error);
  LogMapField field = solver.compute(SurfacePoint::vertex(0), Complex{1.0, 0.0});
  CHECK_THROWS_AS(logMapAt(m, field, SurfacePoint::vertex(99)), Error);
}
