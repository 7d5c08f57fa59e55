#include "vhm/geodesics.h"
#include "vhm/meshgen.h"
#include "vhm/oracles.h"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace vhm;

namespace {
constexpr double kPi = std::numbers::pi;

double wrap2pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
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

double frameToGlobal(const IntrinsicMesh& m, int v) {
  int vh = m.vertexHalfedge[v];
  Vec3 d = m.positions[m.heHead(vh)] - m.positions[v];
  return std::atan2(d.y(), d.x()) - m.halfedgeAngle[vh];
}

// normalized polar angle at v of a global in-plane direction (planar meshes)
double polarAt(const IntrinsicMesh& m, int v, double globalAngle) {
  return m.angleScale(v) * wrap2pi(globalAngle - frameToGlobal(m, v));
}

// extrinsic direction of a face-chart tangent (chart x axis along the first
// canonical edge, y axis toward the third corner)
Vec3 faceChartToExtrinsic(const IntrinsicMesh& m, int f, Complex dir) {
  auto vs = m.faceVertices(f);
  Vec3 e1 = m.positions[vs[1]] - m.positions[vs[0]];
  Vec3 e2 = m.positions[vs[2]] - m.positions[vs[0]];
  Vec3 ex = e1.normalized();
  Vec3 ey = e1.cross(e2).normalized().cross(ex);
  return dir.real() * ex + dir.imag() * ey;
}

double segmentSum(const GeodesicTrace& t) {
  double s = 0.0;
  for (const auto& seg : t.path) s += seg.length;
  return s;
}
} // namespace

TEST_CASE("flat traces land at start plus direction") {
  IntrinsicMesh m = buildMesh(jitteredGrid(10, 0.3, 5));
  int src = vertexNearest(m, Vec3{0.5, 0.5, 0.0});
  Vec3 p0 = m.positions[src];
  for (double ang : {0.3, 1.9, 3.6, 5.1}) {
    for (double len : {0.15, 0.35}) {
      Vec3 disp{len * std::cos(ang), len * std::sin(ang), 0.0};
      Vec3 target = p0 + disp;
      if (target.x() < 0.05 || target.x() > 0.95 || target.y() < 0.05 ||
          target.y() > 0.95)
        continue;
      Complex v = std::polar(len, polarAt(m, src, ang));
      GeodesicTrace t = traceGeodesic(m, SurfacePoint::vertex(src), v);
      CHECK(!t.truncated);
      CHECK(t.length == doctest::Approx(len).epsilon(1e-12));
      CHECK(std::abs(segmentSum(t) - len) < 1e-9 * len);
      CHECK((surfacePointPosition(m, t.endpoint) - target).norm() < 1e-9);
      // crossings are shared between consecutive segments
      for (size_t k = 1; k < t.path.size(); k++) {
        Vec3 a = surfacePointPosition(m, t.path[k - 1].exit);
        Vec3 b = surfacePointPosition(m, t.path[k].entry);
        CHECK((a - b).norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("unfolding two equilateral triangles by hand") {
  double s3 = std::sqrt(3.0);
  MeshData data;
  data.positions = {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0.5, s3 / 2, 0},
                    Vec3{0.5, -s3 / 2, 0}};
  data.faces = {{0, 1, 2}, {0, 3, 1}};
  IntrinsicMesh m = buildMesh(data);

  // from the apex through the midpoint of the shared edge: the unfolded
  // picture is one straight median of length sqrt(3) ending at the far apex
  GeodesicTrace t =
      traceGeodesic(m, SurfacePoint::vertex(2), std::polar(s3, kPi / 2.0));
  CHECK(!t.truncated);
  REQUIRE(t.path.size() == 2);
  CHECK(t.path[0].face == 0);
  CHECK(t.path[1].face == 1);
  CHECK(t.path[0].length == doctest::Approx(s3 / 2.0).epsilon(1e-12));
  CHECK(t.path[1].length == doctest::Approx(s3 / 2.0).epsilon(1e-12));
  Vec3 exitBary = t.path[0].exit.baryCoords;
  CHECK(exitBary[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(exitBary[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(exitBary[2] == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(t.endpoint.isVertex());
  CHECK(t.endpoint.element == 3);

  // the auto-parallel invariant, and the trace reversed
  Complex carried = transportAlongTrace(m, t, t.direction);
  CHECK(std::abs(carried - s3 * t.endDirection) < 1e-14);
  GeodesicTrace back = traceGeodesic(m, t.endpoint, -s3 * t.endDirection);
  REQUIRE(back.endpoint.isVertex());
  CHECK(back.endpoint.element == 2);
}

TEST_CASE("straight runs pass through flat vertices") {
  IntrinsicMesh m = buildMesh(planarGrid(8));
  int src = vertexNearest(m, Vec3{0.125, 0.125, 0.0});
  Vec3 p0 = m.positions[src];

  // along a grid row: every cell boundary is met exactly at a vertex
  double len = 0.75;
  GeodesicTrace row =
      traceGeodesic(m, SurfacePoint::vertex(src), std::polar(len, polarAt(m, src, 0.0)));
  CHECK((surfacePointPosition(m, row.endpoint) - (p0 + Vec3{len, 0, 0})).norm() < 1e-9);

  // along the diagonal through the interior crossing vertices
  double dlen = 0.5 * std::sqrt(2.0);
  GeodesicTrace diag = traceGeodesic(m, SurfacePoint::vertex(src),
                                     std::polar(dlen, polarAt(m, src, kPi / 4.0)));
  CHECK((surfacePointPosition(m, diag.endpoint) - (p0 + Vec3{0.5, 0.5, 0})).norm() < 1e-9);
  CHECK(std::abs(segmentSum(diag) - dlen) < 1e-9 * dlen);
}

TEST_CASE("great circles on the icosphere nearly close") {
  std::vector<double> closure;
  for (int level : {2, 3}) {
    IntrinsicMesh m = buildMesh(icosphere(level));
    int c = vertexNearest(m, Vec3{0, 0, 1});
    GeodesicTrace t =
        traceGeodesic(m, SurfacePoint::vertex(c), std::polar(2.0 * kPi, 0.7));
    CHECK(!t.truncated);
    CHECK(std::abs(segmentSum(t) - 2.0 * kPi) < 1e-9 * 2.0 * kPi);
    closure.push_back((surfacePointPosition(m, t.endpoint) - m.positions[c]).norm());
  }
  CHECK(closure[0] < 0.5);
  CHECK(closure[1] < 0.6 * closure[0]);
}

TEST_CASE("transport along traces is rigid") {
  IntrinsicMesh m = buildMesh(jitteredSphere(2, 0.25, 7));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 10; trial++) {
    int v = static_cast<int>(rng() % m.nVertices());
    Complex dir = std::polar(1.0, uni(rng));
    GeodesicTrace t = traceGeodesic(m, SurfacePoint::vertex(v), dir);
    CHECK(!t.truncated);
    CHECK(std::abs(segmentSum(t) - 1.0) < 1e-9);

    Complex fwd = transportAlongTrace(m, t, dir);
    CHECK(std::abs(fwd - t.endDirection) < 1e-13);
    Complex other = std::polar(2.5, uni(rng));
    CHECK(std::abs(transportAlongTrace(m, t, other)) ==
          doctest::Approx(2.5).epsilon(1e-14));

    GeodesicTrace back = traceGeodesic(m, t.endpoint, -t.endDirection);
    double gap = (surfacePointPosition(m, back.endpoint) - m.positions[v]).norm();
    CHECK(gap < 1e-6);
  }
}

TEST_CASE("transport along a traced arc matches the sphere oracle") {
  std::vector<double> errs;
  for (int level : {2, 3, 4}) {
    IntrinsicMesh m = buildMesh(icosphere(level));
    int s = vertexNearest(m, Vec3{1, 0, 0});
    Complex v = std::polar(1.2, 0.9);
    GeodesicTrace t = traceGeodesic(m, SurfacePoint::vertex(s), v);
    REQUIRE(!t.endpoint.isVertex());

    Complex x = std::polar(1.0, 2.1);
    Vec3 xExt = tangentToExtrinsic(m, TangentVector{x, s});
    Complex moved = transportAlongTrace(m, t, x);
    Vec3 movedExt = faceChartToExtrinsic(m, t.endpoint.element, moved);
    Vec3 endPos = surfacePointPosition(m, t.endpoint).normalized();
    Vec3 expect = oracle::sphereTransport(m.positions[s], endPos, xExt);
    double c = std::clamp(movedExt.normalized().dot(expect.normalized()), -1.0, 1.0);
    errs.push_back(std::acos(c));
  }
  CHECK(errs[1] < 0.6 * errs[0]);
  CHECK(errs[2] < 0.6 * errs[1]);
  CHECK(errs.back() < 0.02);
}

TEST_CASE("boundary contact truncates the walk") {
  IntrinsicMesh m = buildMesh(planarGrid(4));
  int c = vertexNearest(m, Vec3{0.5, 0.5, 0.0});
  GeodesicTrace t = traceGeodesic(m, SurfacePoint::vertex(c),
                                  std::polar(5.0, polarAt(m, c, 0.37)));
  CHECK(t.truncated);
  CHECK(t.length < 1.0);
  CHECK(std::abs(segmentSum(t) - t.length) < 1e-9);
  Vec3 stop = surfacePointPosition(m, t.endpoint);
  double margin = std::min({stop.x(), stop.y(), 1.0 - stop.x(), 1.0 - stop.y()});
  CHECK(margin < 1e-9);

  // a direction pointing out of a boundary fan goes nowhere
  GeodesicTrace out =
      traceGeodesic(m, SurfacePoint::vertex(0), std::polar(1.0, -kPi / 2.0));
  CHECK(out.truncated);
  CHECK(out.length == 0.0);
  CHECK(out.endpoint.isVertex());
  CHECK(out.endpoint.element == 0);
}

TEST_CASE("face starts and short hops") {
  IntrinsicMesh m = buildMesh(planarGrid(6));
  int f = 11;
  SurfacePoint start = SurfacePoint::face(f, Vec3::Constant(1.0 / 3.0));
  Vec3 p0 = surfacePointPosition(m, start);
  Complex v = std::polar(0.02, 1.1);
  GeodesicTrace t = traceGeodesic(m, start, v);
  CHECK(t.path.size() >= 1);
  Vec3 expect = p0 + 0.02 * faceChartToExtrinsic(m, f, std::polar(1.0, 1.1));
  CHECK((surfacePointPosition(m, t.endpoint) - expect).norm() < 1e-12);

  CHECK_THROWS_AS(traceGeodesic(m, start, Complex{0.0, 0.0}), Error);
  CHECK_THROWS_AS(traceGeodesic(m, SurfacePoint::vertex(-2), Complex{1.0, 0.0}), Error);
  CHECK_THROWS_AS(traceGeodesic(m, SurfacePoint::face(9999, Vec3{1, 0, 0}), Complex{1.0, 0.0}),
                  Error);
}
