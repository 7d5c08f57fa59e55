#include "vhm/validate.h"

#include "vhm/geodesics.h"
#include "vhm/meshgen.h"
#include "vhm/oracles.h"
#include "vhm/vector_heat.h"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

namespace vhm {

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

double frameToGlobal(const IntrinsicMesh& m, int v) {
  int vh = m.vertexHalfedge[v];
  Vec3 d = m.positions[m.heHead(vh)] - m.positions[v];
  return std::atan2(d.y(), d.x()) - m.halfedgeAngle[vh];
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

// mean angular error of single-source transport against the sphere oracle
double sphereTransportError(const IntrinsicMesh& m, double t) {
  int src = vertexNearest(m, Vec3{0.0, 0.0, 1.0});
  Complex x0 = std::polar(1.0, 0.3);
  Vec3 xExt = tangentToExtrinsic(m, TangentVector{x0, src});
  VectorHeatSolver solver(m, t);
  TransportResult res = solver.parallelTransport({{src, x0, 1.0}});
  double sum = 0.0;
  int count = 0;
  for (int v = 0; v < m.nVertices(); v++) {
    double dist = oracle::sphereDistance(m.positions[src], m.positions[v]);
    if (dist < 0.2 || dist > 2.8) continue;
    Vec3 expect = oracle::sphereTransport(m.positions[src], m.positions[v], xExt);
    TangentVector ref = extrinsicToTangent(m, v, expect);
    sum += std::abs(wrap(res.field[v].angle() - ref.angle()));
    count++;
  }
  return sum / count;
}

} // namespace

double SuiteResult::metric(const std::string& name) const {
  for (const SuiteMetric& m : metrics)
    if (m.name == name) return m.value;
  throw Error("suite " + suite + " has no metric '" + name + "'");
}

SuiteResult validateFlatExactness(const std::vector<int>& gridSizes) {
  Timer timer;
  SuiteResult out;
  out.suite = "flat-exactness";
  out.passed = true;
  for (int n : gridSizes) {
    IntrinsicMesh m = buildMesh(planarGrid(n));
    double h = m.meanEdgeLength();
    int src = vertexNearest(m, Vec3{0.5, 0.5, 0.0});
    double globalAngle = 0.52;
    Complex x0 = std::polar(1.0, globalAngle - frameToGlobal(m, src));
    VectorHeatSolver solver(m, chooseTime(m));
    TransportResult res = solver.parallelTransport({{src, x0, 1.0}});

    double maxAngle = 0.0, maxMag = 0.0;
    for (int v = 0; v < m.nVertices(); v++) {
      if (v == src) continue;
      double corner = 1e30;
      for (auto c : {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{1, 1, 0}})
        corner = std::min(corner, (m.positions[v] - c).norm());
      if (corner < 10.0 * h) continue;
      double got = frameToGlobal(m, v) + res.field[v].angle();
      maxAngle = std::max(maxAngle, std::abs(wrap(got - globalAngle)));
      maxMag = std::max(maxMag, std::abs(res.magnitude[v] - 1.0));
    }
    out.metrics.push_back({"max_angle_error_n" + std::to_string(n), maxAngle});
    out.metrics.push_back({"max_magnitude_error_n" + std::to_string(n), maxMag});
    out.passed = out.passed && maxAngle < 1e-6 && maxMag < 1e-8;
  }
  out.metrics.push_back({"seconds", timer.seconds()});
  return out;
}

SuiteResult validateSphereConvergence(int levels) {
  if (levels < 2) throw Error("sphere convergence needs at least two levels");
  Timer timer;
  SuiteResult out;
  out.suite = "sphere-convergence";
  std::vector<double> logH, logErr;
  double finest = 0.0;
  for (int level = 2; level < 2 + levels; level++) {
    IntrinsicMesh m = buildMesh(icosphere(level));
    double err = sphereTransportError(m, chooseTime(m));
    finest = err;
    logH.push_back(std::log(m.meanEdgeLength()));
    logErr.push_back(std::log(err));
    out.metrics.push_back({"mean_error_level" + std::to_string(level), err});
  }
  // least-squares slope of log error against log h
  double n = static_cast<double>(logH.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t k = 0; k < logH.size(); k++) {
    sx += logH[k];
    sy += logErr[k];
    sxx += logH[k] * logH[k];
    sxy += logH[k] * logErr[k];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.metrics.push_back({"slope", slope});
  out.metrics.push_back({"finest_mean_error", finest});
  out.metrics.push_back({"seconds", timer.seconds()});
  out.passed = slope >= 0.8 && slope <= 1.5 && finest < 0.05;
  return out;
}

SuiteResult validateTimeSweep() {
  Timer timer;
  SuiteResult out;
  out.suite = "t-sweep";
  out.passed = true;
  // regular meshes have no under-diffusion penalty on the symmetric sphere,
  // so the sweep uses irregular triangulations where both failure modes show
  std::vector<double> multipliers = {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  std::vector<std::pair<std::string, MeshData>> meshes;
  meshes.emplace_back("irregular_sphere_a", jitteredSphere(3, 0.25, 1));
  meshes.emplace_back("irregular_sphere_b", jitteredSphere(3, 0.25, 2));
  meshes.emplace_back("irregular_sphere_c", jitteredSphere(3, 0.25, 3));
  for (const auto& [name, data] : meshes) {
    IntrinsicMesh m = buildMesh(data);
    double bestErr = 0.0, bestM = 0.0;
    for (double mult : multipliers) {
      double err = sphereTransportError(m, chooseTime(m, mult));
      out.metrics.push_back({name + "_m" + std::to_string(mult), err});
      if (bestM == 0.0 || err < bestErr) {
        bestErr = err;
        bestM = mult;
      }
    }
    out.metrics.push_back({name + "_argmin", bestM});
    bool interior = bestM > multipliers.front() && bestM < multipliers.back();
    out.passed = out.passed && interior && bestM >= 0.5 && bestM <= 2.0;
  }
  out.metrics.push_back({"seconds", timer.seconds()});
  return out;
}

SuiteResult validateRoundTrips(int pairsPerMesh, uint64_t seed) {
  Timer timer;
  SuiteResult out;
  out.suite = "round-trip";
  std::vector<std::pair<std::string, MeshData>> meshes;
  meshes.emplace_back("icosphere3", icosphere(3));
  meshes.emplace_back("jittered_grid", jitteredGrid(20, 0.3, 2));
  meshes.emplace_back("torus", torus(24, 16));
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const auto& [name, data] : meshes) {
    IntrinsicMesh m = buildMesh(data);
    VectorHeatSolver solver(m, chooseTime(m));
    double meshWorst = 0.0;
    for (int k = 0; k < pairsPerMesh; k++) {
      int i = static_cast<int>(rng() % m.nVertices());
      int j = static_cast<int>(rng() % m.nVertices());
      if (i == j) j = (j + 1) % m.nVertices();
      RoundtripCheck rc = solver.transportRoundtrip(i, j);
      meshWorst = std::max(meshWorst, std::abs(rc.angleError));
    }
    out.metrics.push_back({name + "_max_angle_error", meshWorst});
    worst = std::max(worst, meshWorst);
  }
  out.metrics.push_back({"max_angle_error", worst});
  out.metrics.push_back({"seconds", timer.seconds()});
  out.passed = worst <= 1e-8;
  return out;
}

SuiteResult validateTraceOracle(int traces, uint64_t seed) {
  Timer timer;
  SuiteResult out;
  out.suite = "trace-oracle";
  IntrinsicMesh m = buildMesh(icosphere(4));
  VectorHeatSolver solver(m, chooseTime(m));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> length(0.3, 1.5);

  double sum = 0.0;
  int done = 0;
  while (done < traces) {
    int src = static_cast<int>(rng() % m.nVertices());
    Complex x0 = std::polar(1.0, angle(rng));
    TransportResult res = solver.parallelTransport({{src, x0, 1.0}});
    for (int k = 0; k < 10 && done < traces; k++, done++) {
      GeodesicTrace trace =
          traceGeodesic(m, SurfacePoint::vertex(src), std::polar(length(rng), angle(rng)));
      Complex reference = transportAlongTrace(m, trace, x0);

      // interpolate the diffused field into the endpoint's chart
      Complex got{0.0, 0.0};
      double refAngle;
      if (trace.endpoint.isVertex()) {
        got = res.field[trace.endpoint.element].value;
        refAngle = std::arg(reference);
      } else {
        int f = trace.endpoint.element;
        auto corners = m.faceVertices(f);
        auto chart = m.layoutFace(f);
        int he = m.faceHalfedge[f];
        for (int c = 0; c < 3; c++) {
          Vec2 d = chart[(c + 1) % 3] - chart[c];
          double chartAngle = std::atan2(d.y(), d.x()) +
                              (res.field[corners[c]].angle() - m.halfedgeAngle[he]) /
                                  m.angleScale(corners[c]);
          got += trace.endpoint.baryCoords[c] * std::polar(1.0, chartAngle);
          he = m.heNext[he];
        }
        refAngle = std::arg(reference);
      }
      sum += std::abs(wrap(std::arg(got) - refAngle));
    }
  }
  double mean = sum / traces;
  out.metrics.push_back({"mean_angle_discrepancy", mean});
  out.metrics.push_back({"traces", static_cast<double>(traces)});
  out.metrics.push_back({"seconds", timer.seconds()});
  out.passed = mean < 0.05;
  return out;
}

std::vector<std::string> validationSuiteNames() {
  return {"flat-exactness", "sphere-convergence", "t-sweep", "round-trip", "trace-oracle"};
}

SuiteResult runValidationSuite(const std::string& name, int levels, uint64_t seed) {
  if (name == "flat-exactness") return validateFlatExactness();
  if (name == "sphere-convergence") return validateSphereConvergence(levels);
  if (name == "t-sweep") return validateTimeSweep();
  if (name == "round-trip") return validateRoundTrips(100, seed);
  if (name == "trace-oracle") return validateTraceOracle(50, seed);
  throw Error("unknown validation suite '" + name + "'");
}

} // namespace vhm
