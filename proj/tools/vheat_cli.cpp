#include "vhm/centers.h"
#include "vhm/geodesics.h"
#include "vhm/io.h"
#include "vhm/logmap.h"
#include "vhm/validate.h"
#include "vhm/vector_heat.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace vhm;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Opts {
  std::string input;
  std::string output;
  std::string format = "csv";
  double tMult = 1.0;
  bool noIdt = false;
  int degree = 1;
  std::uint64_t seed = 1;
  std::vector<std::string> sources;
  std::string suite;
  int levels = 3;
  int count = 5;
  int iterations = 30;
};

struct SourceSpec {
  int vertex = -1;
  double angle = 0.0;
  double mag = 1.0;
  double value = 0.0;
};

SourceSpec parseSource(const std::string& spec) {
  SourceSpec s;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw UsageError("malformed source item '" + item + "' (expected key:value)");
    std::string key = item.substr(0, colon), val = item.substr(colon + 1);
    try {
      if (key == "v")
        s.vertex = std::stoi(val);
      else if (key == "angle")
        s.angle = std::stod(val);
      else if (key == "mag")
        s.mag = std::stod(val);
      else if (key == "value")
        s.value = std::stod(val);
      else
        throw UsageError("unknown source key '" + key + "'");
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("bad number '" + val + "' in source '" + spec + "'");
    }
  }
  if (s.vertex < 0) throw UsageError("source '" + spec + "' needs v:<vertex>");
  return s;
}

std::vector<SourceSpec> parseSources(const Opts& o) {
  if (o.sources.empty()) throw UsageError("at least one --source is required");
  std::vector<SourceSpec> out;
  for (const std::string& s : o.sources) out.push_back(parseSource(s));
  return out;
}

std::string outputPath(const Opts& o, const std::string& subcommand) {
  if (!o.output.empty()) return o.output;
  return subcommand + "_output." + (o.format == "json" ? "json" : "csv");
}

FieldExport makeHeader(const IntrinsicMesh& mesh, const Opts& o, double t) {
  FieldExport field;
  field.meshChecksum = meshChecksum(mesh);
  field.t = t;
  field.tMultiplier = o.tMult;
  field.degree = o.degree;
  field.usedIdt = !o.noIdt;
  return field;
}

nlohmann::json provenance(const IntrinsicMesh& mesh, const Opts& o, const std::string& cmd,
                          double t) {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["command"] = cmd;
  j["mesh_checksum"] = meshChecksum(mesh);
  j["t"] = t;
  j["t_mult"] = o.tMult;
  j["idt"] = !o.noIdt;
  j["seed"] = o.seed;
  return j;
}

void writeJsonFile(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << "\n";
}

nlohmann::json pointJson(const SurfacePoint& p) {
  nlohmann::json j;
  j["type"] = p.isVertex() ? "vertex" : "face";
  j["element"] = p.element;
  if (!p.isVertex()) j["bary"] = {p.baryCoords[0], p.baryCoords[1], p.baryCoords[2]};
  return j;
}

int runTransport(const Opts& o) {
  IntrinsicMesh mesh = loadMesh(o.input);
  auto specs = parseSources(o);
  double t = chooseTime(mesh, o.tMult);
  VectorHeatSolver solver(mesh, t, o.degree, !o.noIdt);
  std::vector<VectorSource> sources;
  for (const SourceSpec& s : specs)
    sources.push_back({s.vertex, std::polar(s.mag, s.angle), 1.0});
  TransportResult res = solver.parallelTransport(sources);

  FieldExport field = makeHeader(mesh, o, t);
  for (int v = 0; v < mesh.nVertices(); v++) {
    FieldRecord r;
    r.vertex = v;
    r.angle = res.field[v].angle();
    r.magnitude = res.magnitude[v];
    if (mesh.hasPositions())
      r.extrinsic = tangentToExtrinsic(
          mesh, TangentVector{std::polar(res.magnitude[v], res.field[v].angle()), v});
    field.records.push_back(r);
  }
  std::string path = outputPath(o, "transport");
  writeField(field, o.format, path);
  std::cout << "transported " << sources.size() << " source(s) across "
            << mesh.nVertices() << " vertices -> " << path << "\n";
  return 0;
}

int runInterpolate(const Opts& o) {
  IntrinsicMesh mesh = loadMesh(o.input);
  auto specs = parseSources(o);
  double t = chooseTime(mesh, o.tMult);
  VectorHeatSolver solver(mesh, t, 1, !o.noIdt);
  std::vector<ScalarSource> sources;
  for (const SourceSpec& s : specs) sources.push_back({s.vertex, s.value, 1.0});
  ScalarInterpolationResult res = solver.scalarInterpolate(sources);

  FieldExport field = makeHeader(mesh, o, t);
  for (int v = 0; v < mesh.nVertices(); v++)
    field.records.push_back({v, 0.0, res.values[v], std::nullopt, std::nullopt});
  std::string path = outputPath(o, "interpolate");
  writeField(field, o.format, path);
  std::cout << "interpolated " << sources.size() << " value(s) across "
            << mesh.nVertices() << " vertices -> " << path << "\n";
  return 0;
}

int runLogmap(const Opts& o) {
  IntrinsicMesh mesh = loadMesh(o.input);
  auto specs = parseSources(o);
  if (specs.size() != 1) throw UsageError("logmap takes exactly one --source basepoint");
  double t = o.tMult * mesh.meanEdgeLength();
  LogMapSolver solver(mesh, t, !o.noIdt);
  LogMapField lm =
      solver.compute(SurfacePoint::vertex(specs[0].vertex), std::polar(1.0, specs[0].angle));

  FieldExport field = makeHeader(mesh, o, t);
  for (int v = 0; v < mesh.nVertices(); v++) {
    FieldRecord r;
    r.vertex = v;
    r.angle = lm.phi[v];
    r.magnitude = lm.r[v];
    r.uv = Vec2{lm.u[v], lm.v[v]};
    field.records.push_back(r);
  }
  std::string path = outputPath(o, "logmap");
  writeField(field, o.format, path);
  std::cout << "log map about vertex " << specs[0].vertex << " -> " << path << "\n";
  return 0;
}

int runCenter(const Opts& o, int exponent) {
  IntrinsicMesh mesh = loadMesh(o.input);
  auto specs = parseSources(o);
  double h = mesh.meanEdgeLength();
  double t = o.tMult * h;
  CenterSolver solver(mesh, t, !o.noIdt);
  CenterProblem problem;
  problem.exponent = exponent;
  problem.tolerance = 0.2 * h;
  for (const SourceSpec& s : specs) problem.samples.push_back(SurfacePoint::vertex(s.vertex));
  CenterResult res = solver.findCenter(problem, o.seed);

  std::string cmd = exponent == 2 ? "mean" : "median";
  nlohmann::json j = provenance(mesh, o, cmd, t);
  j["schema"] = "vheat-center/1";
  j["center"] = pointJson(res.center);
  j["iterations"] = res.iterations;
  j["converged"] = res.converged;
  j["final_gradient_norm"] = res.finalGradientNorm;
  nlohmann::json traj = nlohmann::json::array();
  for (const SurfacePoint& p : res.trajectory) traj.push_back(pointJson(p));
  j["trajectory"] = traj;
  std::string path = o.output.empty() ? cmd + "_output.json" : o.output;
  writeJsonFile(j, path);
  std::cout << cmd << " of " << specs.size() << " sample(s): "
            << (res.center.isVertex() ? "vertex " : "face ") << res.center.element
            << " after " << res.iterations << " iteration(s), |v|="
            << res.finalGradientNorm << (res.converged ? "" : " (not converged)")
            << " -> " << path << "\n";
  return 0;
}

int runGcvt(const Opts& o) {
  IntrinsicMesh mesh = loadMesh(o.input);
  auto specs = parseSources(o);
  double t = chooseTime(mesh, o.tMult);
  std::vector<SurfacePoint> sites;
  for (const SourceSpec& s : specs) sites.push_back(SurfacePoint::vertex(s.vertex));
  VoronoiState st = gcvt(mesh, sites, t, o.iterations);

  std::string path = o.output.empty() ? "gcvt_output.json" : o.output;
  nlohmann::json j = provenance(mesh, o, "gcvt", t);
  j["schema"] = "vheat-gcvt/1";
  j["iterations"] = st.iterations;
  j["warnings"] = st.warnings;
  nlohmann::json siteList = nlohmann::json::array();
  for (const SurfacePoint& s : st.sites) siteList.push_back(pointJson(s));
  j["sites"] = siteList;
  writeJsonFile(j, path);
  for (const std::string& w : st.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "gcvt with " << sites.size() << " site(s), " << st.iterations
            << " Lloyd iteration(s) -> " << path << "\n";
  return 0;
}

int runLandmarks(const Opts& o) {
  IntrinsicMesh mesh = loadMesh(o.input);
  auto lms = orderedLandmarks(mesh, o.count, 3, o.seed);
  std::string path = o.output.empty() ? "landmarks_output.json" : o.output;
  nlohmann::json j = provenance(mesh, o, "landmarks", 0.0);
  j["schema"] = "vheat-landmarks/1";
  nlohmann::json list = nlohmann::json::array();
  for (const SurfacePoint& l : lms) list.push_back(pointJson(l));
  j["landmarks"] = list;
  writeJsonFile(j, path);
  std::cout << lms.size() << " landmark(s) -> " << path << "\n";
  return 0;
}

int runValidate(const Opts& o) {
  std::vector<std::string> names = validationSuiteNames();
  if (std::find(names.begin(), names.end(), o.suite) == names.end()) {
    std::string known;
    for (const std::string& n : names) known += " " + n;
    throw UsageError("validate needs --suite, one of:" + known);
  }
  SuiteResult res = runValidationSuite(o.suite, o.levels, o.seed);

  nlohmann::json j;
  j["schema"] = "vheat-metrics/1";
  j["tool_version"] = kToolVersion;
  j["suite"] = res.suite;
  j["passed"] = res.passed;
  j["seed"] = o.seed;
  j["levels"] = o.levels;
  nlohmann::json metrics;
  for (const SuiteMetric& m : res.metrics)
    if (m.name != "seconds") metrics[m.name] = m.value; // keep the file deterministic
  j["metrics"] = metrics;
  std::string path = o.output.empty() ? "validate_" + res.suite + ".json" : o.output;
  writeJsonFile(j, path);

  for (const SuiteMetric& m : res.metrics)
    std::cout << "  " << m.name << " = " << m.value << "\n";
  std::cout << "suite " << res.suite << ": " << (res.passed ? "pass" : "FAIL")
            << " -> " << path << "\n";
  return res.passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"vector heat method toolkit: parallel transport, log maps, and "
               "derived geometry on triangle meshes"};
  app.require_subcommand(1);
  Opts o;

  auto addCommon = [&](CLI::App* c, bool needsInput) {
    if (needsInput)
      c->add_option("input", o.input, "mesh file (OBJ or intrinsic plain text)")
          ->required();
    c->add_option("--output", o.output, "output file path");
    c->add_option("--format", o.format, "export format")
        ->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--t-mult", o.tMult, "diffusion time multiplier")
        ->check(CLI::PositiveNumber);
    c->add_flag("--no-idt", o.noIdt, "skip intrinsic Delaunay retriangulation");
    c->add_option("--seed", o.seed, "random seed");
  };

  CLI::App* transport = app.add_subcommand("transport", "parallel transport from vector sources");
  addCommon(transport, true);
  transport->add_option("--source", o.sources, "source as v:<id>[,angle:<a>][,mag:<m>]");
  transport->add_option("--degree", o.degree, "symmetry degree of the transported field")
      ->check(CLI::PositiveNumber);

  CLI::App* interpolate =
      app.add_subcommand("interpolate", "closest-point interpolation of scalar values");
  addCommon(interpolate, true);
  interpolate->add_option("--source", o.sources, "source as v:<id>,value:<x>");

  CLI::App* logmap = app.add_subcommand("logmap", "logarithmic map about a basepoint");
  addCommon(logmap, true);
  logmap->add_option("--source", o.sources, "basepoint as v:<id>[,angle:<a>]");

  CLI::App* mean = app.add_subcommand("mean", "Karcher mean of sample points");
  addCommon(mean, true);
  mean->add_option("--source", o.sources, "sample as v:<id>");

  CLI::App* median = app.add_subcommand("median", "geometric median of sample points");
  addCommon(median, true);
  median->add_option("--source", o.sources, "sample as v:<id>");

  CLI::App* gcvtCmd = app.add_subcommand("gcvt", "geodesic centroidal Voronoi tessellation");
  addCommon(gcvtCmd, true);
  gcvtCmd->add_option("--source", o.sources, "initial site as v:<id>");
  gcvtCmd->add_option("--iterations", o.iterations, "Lloyd iterations")
      ->check(CLI::PositiveNumber);

  CLI::App* landmarks = app.add_subcommand("landmarks", "ordered intrinsic landmarks");
  addCommon(landmarks, true);
  landmarks->add_option("--count", o.count, "number of landmarks")
      ->check(CLI::NonNegativeNumber);

  CLI::App* validate = app.add_subcommand("validate", "run a built-in oracle suite");
  addCommon(validate, false);
  std::string suiteHelp = "one of:";
  for (const std::string& s : validationSuiteNames()) suiteHelp += " " + s;
  validate->add_option("--suite", o.suite, suiteHelp);
  validate->add_option("--levels", o.levels, "refinement levels for convergence suites")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (transport->parsed()) return runTransport(o);
    if (interpolate->parsed()) return runInterpolate(o);
    if (logmap->parsed()) return runLogmap(o);
    if (mean->parsed()) return runCenter(o, 2);
    if (median->parsed()) return runCenter(o, 1);
    if (gcvtCmd->parsed()) return runGcvt(o);
    if (landmarks->parsed()) return runLandmarks(o);
    if (validate->parsed()) return runValidate(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
