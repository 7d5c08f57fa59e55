#include "vhm/vector_heat.h"

#include "vhm/operators.h"

#include <cmath>

namespace vhm {

namespace {

constexpr double kDegenerate = 1e-300;

void checkSources(const IntrinsicMesh& mesh, size_t count, int vertex, double weight) {
  if (count == 0) throw Error("source set is empty");
  if (vertex < 0 || vertex >= mesh.nVertices())
    throw Error("source vertex " + std::to_string(vertex) + " out of range");
  if (weight <= 0.0) throw Error("source weights must be positive");
}

} // namespace

double chooseTime(const IntrinsicMesh& mesh, double multiplier) {
  if (multiplier <= 0.0) throw Error("time multiplier must be positive");
  double h = mesh.meanEdgeLength();
  return multiplier * h * h;
}

VectorHeatSolver::VectorHeatSolver(const IntrinsicMesh& mesh, double t, int degree,
                                   bool useIdt)
    : mesh_(mesh), t_(t), degree_(degree) {
  if (t <= 0.0) throw Error("diffusion time must be positive");
  if (degree < 1) throw Error("symmetry degree must be at least 1");
  if (useIdt) idt_.emplace(toIntrinsicDelaunay(mesh));
  const IntrinsicMesh& m = solveMesh();

  mass_ = assembleMassMatrix(m);
  SparseComplex vecOp = (t * assembleConnectionLaplacian(m, degree)).eval();
  SparseReal scalOp = (t * assembleCotanLaplacian(m)).eval();
  for (int v = 0; v < m.nVertices(); v++) {
    vecOp.coeffRef(v, v) += Complex{mass_[v], 0.0};
    scalOp.coeffRef(v, v) += mass_[v];
  }
  vectorSystem_ = std::make_unique<ComplexFactorization>(vecOp);
  scalarSystem_ = std::make_unique<RealFactorization>(scalOp);
}

TransportResult VectorHeatSolver::parallelTransport(
    const std::vector<VectorSource>& sources) const {
  int n = mesh_.nVertices();
  CVec y0 = CVec::Zero(n);
  Vec u0 = Vec::Zero(n);
  Vec phi0 = Vec::Zero(n);
  double totalMag = 0.0;
  for (const auto& s : sources) {
    checkSources(mesh_, sources.size(), s.vertex, s.weight);
    y0[s.vertex] += s.weight * s.value;
    u0[s.vertex] += s.weight * std::abs(s.value);
    phi0[s.vertex] += s.weight;
    totalMag += std::abs(s.value);
  }
  if (totalMag == 0.0) throw Error("all source vectors are zero");

  CVec y = vectorSystem_->solve(y0);
  Vec u = scalarSystem_->solve(u0);
  Vec phi = scalarSystem_->solve(phi0);

  TransportResult res;
  res.t = t_;
  res.direction = y;
  res.magnitude = Vec::Zero(n);
  res.degenerate.assign(n, 0);
  res.field.reserve(n);
  for (int v = 0; v < n; v++) {
    double mag = phi[v] > kDegenerate ? u[v] / phi[v] : 0.0;
    res.magnitude[v] = mag;
    double len = std::abs(y[v]);
    if (len <= kDegenerate || phi[v] <= kDegenerate) {
      res.degenerate[v] = 1;
      res.field.push_back(TangentVector{Complex{0.0, 0.0}, v});
    } else {
      res.field.push_back(TangentVector{mag * y[v] / len, v});
    }
  }
  return res;
}

ScalarInterpolationResult VectorHeatSolver::scalarInterpolate(
    const std::vector<ScalarSource>& sources) const {
  int n = mesh_.nVertices();
  Vec u0 = Vec::Zero(n);
  Vec phi0 = Vec::Zero(n);
  for (const auto& s : sources) {
    checkSources(mesh_, sources.size(), s.vertex, s.weight);
    u0[s.vertex] += s.weight * s.value;
    phi0[s.vertex] += s.weight;
  }
  Vec u = scalarSystem_->solve(u0);
  Vec phi = scalarSystem_->solve(phi0);

  ScalarInterpolationResult res;
  res.values = Vec::Zero(n);
  res.degenerate.assign(n, 0);
  for (int v = 0; v < n; v++) {
    if (phi[v] > kDegenerate) {
      res.values[v] = u[v] / phi[v];
    } else {
      res.degenerate[v] = 1;
    }
  }
  return res;
}

RoundtripCheck VectorHeatSolver::transportRoundtrip(int i, int j) const {
  if (i == j) throw Error("round trip needs two distinct vertices");
  int n = mesh_.nVertices();
  CVec src = CVec::Zero(n);
  src[i] = Complex{1.0, 0.0};
  CVec there = vectorSystem_->solve(src);
  src[i] = Complex{0.0, 0.0};
  src[j] = there[j];
  CVec back = vectorSystem_->solve(src);

  RoundtripCheck check;
  check.scaling = std::abs(back[i]);
  check.angleError = std::abs(std::arg(back[i]));
  return check;
}

} // namespace vhm
