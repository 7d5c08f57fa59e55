#include "vhm/geodesics.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vhm {

namespace {

constexpr double kPi = std::numbers::pi;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double wrap2pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

// Running state of the straight walk: the current face laid out rigidly in a
// working plane, the position, the unit direction, and the halfedge whose
// edge we entered through (-1 after a fresh start at a vertex).
struct WalkState {
  int face = -1;
  std::array<int, 3> halfedges{};  // face halfedges in canonical corner order
  std::array<Vec2, 3> chart{};
  Vec2 p{0.0, 0.0};
  Vec2 d{1.0, 0.0};
  int entrySlot = -1;
};

std::array<int, 3> faceHalfedges(const IntrinsicMesh& mesh, int f) {
  int h0 = mesh.faceHalfedge[f];
  int h1 = mesh.heNext[h0];
  return {h0, h1, mesh.heNext[h1]};
}

Vec3 barycentricInChart(const std::array<Vec2, 3>& chart, const Vec2& q) {
  double a2 = cross2(chart[1] - chart[0], chart[2] - chart[0]);
  Vec3 b{cross2(chart[1] - q, chart[2] - q) / a2,
         cross2(chart[2] - q, chart[0] - q) / a2,
         cross2(chart[0] - q, chart[1] - q) / a2};
  for (int c = 0; c < 3; c++) b[c] = std::max(b[c], 0.0);
  return b / b.sum();
}

// Angle rotating the working chart of state.face onto the face's canonical
// layout chart.
double chartToCanonicalAngle(const IntrinsicMesh& mesh, const WalkState& s) {
  auto canon = mesh.layoutFace(s.face);
  Vec2 run = s.chart[1] - s.chart[0];
  Vec2 can = canon[1] - canon[0];
  return std::atan2(can.y(), can.x()) - std::atan2(run.y(), run.x());
}

// Starts (or restarts after a vertex hit) the walk from vertex w in the
// normalized polar direction psi. Returns false when the direction points
// outside a boundary fan.
bool enterFan(const IntrinsicMesh& mesh, int w, double psi, WalkState& s) {
  double scale = mesh.angleScale(w);
  double range = mesh.vertexIsBoundary[w] ? kPi : 2.0 * kPi;
  if (!mesh.vertexIsBoundary[w]) psi = wrap2pi(psi);
  if (psi < -1e-12 || psi > range + 1e-12) return false;
  psi = std::clamp(psi, 0.0, range);

  // the wedges tile [0, range); pick the one containing psi (nearest wins
  // when roundoff leaves psi between two spans)
  int chosen = -1;
  double offset = 0.0, bestMiss = 0.0;
  for (int he : mesh.outgoingHalfedges(w)) {
    if (!mesh.isInterior(he)) continue;
    double lo = mesh.halfedgeAngle[he];
    double span = scale * mesh.cornerAngle[he];
    double miss = std::max({lo - psi, psi - lo - span, 0.0});
    if (chosen < 0 || miss < bestMiss) {
      chosen = he;
      bestMiss = miss;
      offset = std::clamp(psi - lo, 0.0, span) / scale;
    }
    if (bestMiss == 0.0) break;
  }
  if (chosen < 0) return false;

  s.face = mesh.heFace[chosen];
  s.halfedges = faceHalfedges(mesh, s.face);
  auto canon = mesh.layoutFace(s.face);
  s.chart = canon;
  int slot = 0;
  while (s.halfedges[slot] != chosen) slot++;
  s.p = s.chart[slot];
  Vec2 e = s.chart[(slot + 1) % 3] - s.chart[slot];
  double ang = std::atan2(e.y(), e.x()) + offset;
  s.d = Vec2{std::cos(ang), std::sin(ang)};
  s.entrySlot = -1;
  return true;
}

// Unfolds the face across the edge of s.halfedges[slot] into the working
// plane and makes it current. Returns false at the boundary.
bool crossEdge(const IntrinsicMesh& mesh, int slot, WalkState& s) {
  int tw = mesh.heTwin[s.halfedges[slot]];
  if (!mesh.isInterior(tw)) return false;
  Vec2 pa = s.chart[(slot + 1) % 3];  // tail of tw
  Vec2 pb = s.chart[slot];
  int g = mesh.heFace[tw];
  auto gh = faceHalfedges(mesh, g);
  int gSlot = 0;
  while (gh[gSlot] != tw) gSlot++;
  double alpha = mesh.cornerAngle[tw];
  double lca = mesh.edgeLength[mesh.heEdge[mesh.hePrev(tw)]];
  Vec2 u = (pb - pa).normalized();
  Vec2 ru{u.x() * std::cos(alpha) - u.y() * std::sin(alpha),
          u.x() * std::sin(alpha) + u.y() * std::cos(alpha)};
  Vec2 pc = pa + lca * ru;

  s.face = g;
  s.halfedges = gh;
  s.chart[gSlot] = pa;
  s.chart[(gSlot + 1) % 3] = pb;
  s.chart[(gSlot + 2) % 3] = pc;
  s.entrySlot = gSlot;
  return true;
}

} // namespace

GeodesicTrace traceGeodesic(const IntrinsicMesh& mesh, const SurfacePoint& start,
                            Complex v) {
  double total = std::abs(v);
  if (total == 0.0) throw Error("geodesic direction must be nonzero");

  GeodesicTrace trace;
  trace.start = start;
  trace.direction = v;

  WalkState s;
  if (start.isVertex()) {
    int w = start.element;
    if (w < 0 || w >= mesh.nVertices()) throw Error("start vertex out of range");
    if (!enterFan(mesh, w, std::arg(v), s)) {
      trace.endpoint = start;
      trace.endDirection = v / total;
      trace.truncated = true;
      return trace;
    }
  } else {
    int f = start.element;
    if (f < 0 || f >= mesh.nFaces()) throw Error("start face out of range");
    s.face = f;
    s.halfedges = faceHalfedges(mesh, f);
    s.chart = mesh.layoutFace(f);
    s.p = Vec2::Zero();
    for (int c = 0; c < 3; c++) s.p += start.baryCoords[c] * s.chart[c];
    double ang = std::arg(v);
    s.d = Vec2{std::cos(ang), std::sin(ang)};
    s.entrySlot = -1;
  }

  double remaining = total;
  double h = mesh.meanEdgeLength();
  int maxSteps = 1000 + static_cast<int>(200.0 * total / h);
  Vec2 segStart = s.p;
  Vec3 segEntry = start.isVertex() ? barycentricInChart(s.chart, s.p)
                                   : Vec3(start.baryCoords);

  auto pushSegment = [&](const Vec2& exit) {
    TraceSegment seg;
    seg.face = s.face;
    seg.entry = SurfacePoint::face(s.face, segEntry);
    seg.exit = SurfacePoint::face(s.face, barycentricInChart(s.chart, exit));
    seg.length = (exit - segStart).norm();
    trace.path.push_back(seg);
  };

  auto finishInFace = [&](const Vec2& q, bool truncated) {
    pushSegment(q);
    trace.endpoint = SurfacePoint::face(s.face, barycentricInChart(s.chart, q));
    trace.endDirection = std::polar(1.0, std::atan2(s.d.y(), s.d.x()) +
                                             chartToCanonicalAngle(mesh, s));
    trace.truncated = truncated;
    trace.length = total;
  };

  for (int step = 0; step < maxSteps; step++) {
    // exit through the nearest non-entry edge
    int bestSlot = -1;
    double bestS = 0.0, bestU = 0.0;
    for (int pass = 0; pass < 2 && bestSlot < 0; pass++) {
      double uTol = pass == 0 ? 1e-9 : 1e-6;
      for (int slot = 0; slot < 3; slot++) {
        if (slot == s.entrySlot) continue;
        Vec2 a = s.chart[slot];
        Vec2 e = s.chart[(slot + 1) % 3] - a;
        double denom = cross2(s.d, e);
        if (std::abs(denom) < 1e-300) continue;
        double sd = cross2(a - s.p, e) / denom;
        double ud = cross2(a - s.p, s.d) / denom;
        if (sd <= 1e-12 * h || ud < -uTol || ud > 1.0 + uTol) continue;
        if (bestSlot < 0 || sd < bestS) {
          bestSlot = slot;
          bestS = sd;
          bestU = std::clamp(ud, 0.0, 1.0);
        }
      }
    }
    if (bestSlot < 0)
      throw Error("geodesic tracing lost the containing face " + std::to_string(s.face));

    if (remaining <= bestS) {
      finishInFace(s.p + remaining * s.d, false);
      remaining = 0.0;
      return trace;
    }

    Vec2 a = s.chart[bestSlot];
    Vec2 b = s.chart[(bestSlot + 1) % 3];
    Vec2 exit = a + bestU * (b - a);
    remaining -= (exit - segStart).norm();
    pushSegment(exit);

    int he = s.halfedges[bestSlot];
    double edgeLen = mesh.edgeLength[mesh.heEdge[he]];
    bool atTail = bestU * edgeLen <= 1e-12;
    bool atHead = (1.0 - bestU) * edgeLen <= 1e-12;
    if (atTail || atHead) {
      // passed exactly through a vertex: continue with equal normalized
      // angle on both sides
      int w = atTail ? mesh.heTail[he] : mesh.heHead(he);
      int slotW = atTail ? bestSlot : (bestSlot + 1) % 3;
      int heW = s.halfedges[slotW];
      Vec2 eW = s.chart[(slotW + 1) % 3] - s.chart[slotW];
      Vec2 rev = -s.d;
      double delta = std::atan2(cross2(eW, rev), eW.dot(rev));
      double psiBack = mesh.halfedgeAngle[heW] + mesh.angleScale(w) * delta;
      double psiOut = psiBack + kPi;
      if (remaining <= 1e-12 * total) {
        trace.endpoint = SurfacePoint::vertex(w);
        trace.endDirection = std::polar(1.0, wrap2pi(psiOut));
        trace.truncated = false;
        trace.length = total - std::max(remaining, 0.0);
        return trace;
      }
      if (mesh.vertexIsBoundary[w] || !enterFan(mesh, w, psiOut, s)) {
        trace.endpoint = SurfacePoint::vertex(w);
        trace.endDirection = std::polar(1.0, psiBack + kPi);
        trace.truncated = true;
        trace.length = total - remaining;
        return trace;
      }
      segStart = s.p;
      segEntry = barycentricInChart(s.chart, s.p);
      continue;
    }

    if (!crossEdge(mesh, bestSlot, s)) {
      // boundary edge: stop where we hit it
      s.entrySlot = -1;
      trace.endpoint = trace.path.back().exit;
      trace.endDirection = std::polar(1.0, std::atan2(s.d.y(), s.d.x()) +
                                               chartToCanonicalAngle(mesh, s));
      trace.truncated = true;
      trace.length = total - remaining;
      return trace;
    }
    s.p = exit;
    segStart = exit;
    segEntry = barycentricInChart(s.chart, exit);
  }
  throw Error("geodesic tracing exceeded the step budget");
}

Complex transportAlongTrace(const IntrinsicMesh& mesh, const GeodesicTrace& trace,
                            Complex value) {
  if (std::abs(trace.direction) == 0.0) throw Error("trace has no direction");
  double scaleStart =
      trace.start.isVertex() ? mesh.angleScale(trace.start.element) : 1.0;
  double scaleEnd =
      trace.endpoint.isVertex() ? mesh.angleScale(trace.endpoint.element) : 1.0;
  double rel = (std::arg(value) - std::arg(trace.direction)) / scaleStart;
  return trace.endDirection * std::polar(std::abs(value), rel * scaleEnd);
}

} // namespace vhm
