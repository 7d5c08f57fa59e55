#include "vhm/meshgen.h"
#include "vhm/operators.h"
#include "vhm/solver.h"

#include <doctest.h>

#include <cmath>

using namespace vhm;

TEST_CASE("identity backsolve returns the input") {
  SparseReal I(5, 5);
  I.setIdentity();
  RealFactorization f(I);
  Vec b(5);
  b << 1, -2, 3, 0.5, 4;
  CHECK((f.solve(b) - b).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(f.solve(Vec::Zero(5)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("2x2 Hermitian closed form") {
  SparseComplex A(2, 2);
  A.insert(0, 0) = Complex{2.0, 0.0};
  A.insert(0, 1) = Complex{0.0, 1.0};
  A.insert(1, 0) = Complex{0.0, -1.0};
  A.insert(1, 1) = Complex{2.0, 0.0};
  ComplexFactorization f(A);
  CVec b(2);
  b << Complex{1.0, 0.0}, Complex{0.0, 0.0};
  CVec x = f.solve(b);
  CHECK(std::abs(x[0] - Complex{2.0 / 3.0, 0.0}) < 1e-12);
  CHECK(std::abs(x[1] - Complex{0.0, 1.0 / 3.0}) < 1e-12);
}

TEST_CASE("constants are steady states of (M + tL)") {
  IntrinsicMesh m = buildMesh(jitteredSphere(2, 0.3, 61));
  SparseReal L = assembleCotanLaplacian(m);
  Vec mass = assembleMassMatrix(m);
  double t = m.meanEdgeLength() * m.meanEdgeLength();
  SparseReal A = t * L;
  for (int v = 0; v < m.nVertices(); v++) A.coeffRef(v, v) += mass[v];
  RealFactorization f(A);
  Vec x = f.solve(mass);
  CHECK((x - Vec::Ones(m.nVertices())).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("backsolves are deterministic and reuse the factorization") {
  IntrinsicMesh m = buildMesh(icosphere(2));
  SparseReal L = assembleCotanLaplacian(m);
  Vec mass = assembleMassMatrix(m);
  SparseReal A = 0.01 * L;
  for (int v = 0; v < m.nVertices(); v++) A.coeffRef(v, v) += mass[v];

  resetFactorizationCount();
  RealFactorization f(A);
  CHECK(factorizationCount() == 1);
  Vec b = Vec::Zero(m.nVertices());
  b[3] = 1.0;
  Vec other = b;
  Vec x1 = f.solve(b);
  for (int trial = 0; trial < 5; trial++) {
    Vec again = f.solve(b);
    CHECK((again - x1).cwiseAbs().maxCoeff() == 0.0);
    other[7] += 0.25; // new right-hand sides never trigger refactorization
    f.solve(other);
  }
  CHECK(factorizationCount() == 1);
  CHECK((A * x1 - Vec::Unit(m.nVertices(), 3)).norm() <= 1e-8);
}

TEST_CASE("dimension mismatch and indefiniteness are reported") {
  SparseReal I(4, 4);
  I.setIdentity();
  RealFactorization f(I);
  CHECK_THROWS_AS(f.solve(Vec::Ones(5)), Error);

  SparseReal bad(2, 2);
  bad.insert(0, 0) = 1.0;
  bad.insert(1, 1) = -1.0;
  CHECK_THROWS_WITH_AS(RealFactorization{bad}, doctest::Contains("Delaunay"), Error);
}

TEST_CASE("pinned Poisson solve gauges the solution at the pinned vertex") {
  IntrinsicMesh m = buildMesh(planarDisk(6));
  SparseReal L = assembleCotanLaplacian(m);
  RealFactorization f(pinVertex(L, 0));
  Vec mass = assembleMassMatrix(m);
  // rhs with zero total integral, zeroed at the pin
  Vec rhs = mass;
  rhs.array() -= mass.sum() / m.nVertices();
  rhs[0] = 0.0;
  Vec x = f.solve(rhs);
  CHECK(x[0] == 0.0);
  Vec full = L * x;
  for (int v = 1; v < m.nVertices(); v++)
    CHECK(std::abs(full[v] - rhs[v]) < 1e-10);
}
