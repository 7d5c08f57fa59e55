#include "vhm/meshgen.h"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace vhm {

namespace {
constexpr double kPi = std::numbers::pi;
}

IntrinsicMesh buildMesh(const MeshData& data) {
  return buildIntrinsicMesh(data.faces, data.positions);
}

MeshData flatFan(int n) {
  MeshData m;
  m.positions.push_back(Vec3::Zero());
  bool closed = (n == 6);
  int ringCount = closed ? 6 : n + 1;
  for (int a = 0; a < ringCount; a++) {
    double ang = 2.0 * kPi * a / 6.0;
    m.positions.push_back(Vec3{std::cos(ang), std::sin(ang), 0.0});
  }
  for (int a = 0; a < n; a++) {
    m.faces.push_back({0, 1 + a, 1 + (a + 1) % ringCount});
  }
  return m;
}

MeshData planarGrid(int n, double sideLength) {
  MeshData m;
  auto id = [n](int x, int y) { return y * (n + 1) + x; };
  for (int y = 0; y <= n; y++)
    for (int x = 0; x <= n; x++)
      m.positions.push_back(Vec3{sideLength * x / n, sideLength * y / n, 0.0});
  for (int y = 0; y < n; y++) {
    for (int x = 0; x < n; x++) {
      int a = id(x, y), b = id(x + 1, y), c = id(x + 1, y + 1), d = id(x, y + 1);
      m.faces.push_back({a, b, c});
      m.faces.push_back({a, c, d});
    }
  }
  return m;
}

MeshData planarDisk(int rings, double radius) {
  MeshData m;
  m.positions.push_back(Vec3::Zero());
  std::vector<int> ringStart{-1}; // start index of each ring (ring 0 = center)
  ringStart[0] = 0;
  for (int k = 1; k <= rings; k++) {
    ringStart.push_back(static_cast<int>(m.positions.size()));
    int cnt = 6 * k;
    double r = radius * k / rings;
    for (int a = 0; a < cnt; a++) {
      double ang = 2.0 * kPi * a / cnt;
      m.positions.push_back(Vec3{r * std::cos(ang), r * std::sin(ang), 0.0});
    }
  }
  // center fan
  for (int a = 0; a < 6; a++) m.faces.push_back({0, 1 + a, 1 + (a + 1) % 6});
  // ring-to-ring strips
  for (int k = 1; k < rings; k++) {
    int inner = ringStart[k], innerCnt = 6 * k;
    int outer = ringStart[k + 1], outerCnt = 6 * (k + 1);
    int i = 0, o = 0;
    // walk both rings by angle, always advancing the ring whose next vertex
    // comes first
    while (i < innerCnt || o < outerCnt) {
      double angInnerNext = 2.0 * kPi * (i + 1) / innerCnt;
      double angOuterNext = 2.0 * kPi * (o + 1) / outerCnt;
      int iv = inner + (i % innerCnt);
      int ov = outer + (o % outerCnt);
      if (o < outerCnt && (i >= innerCnt || angOuterNext <= angInnerNext)) {
        int ov2 = outer + ((o + 1) % outerCnt);
        m.faces.push_back({iv, ov, ov2});
        o++;
      } else {
        int iv2 = inner + ((i + 1) % innerCnt);
        m.faces.push_back({iv, ov, iv2});
        i++;
      }
    }
  }
  return m;
}

MeshData icosphere(int subdivisions, double radius) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  MeshData m;
  auto add = [&](double x, double y, double z) {
    m.positions.push_back(Vec3{x, y, z}.normalized());
  };
  add(-1, t, 0); add(1, t, 0); add(-1, -t, 0); add(1, -t, 0);
  add(0, -1, t); add(0, 1, t); add(0, -1, -t); add(0, 1, -t);
  add(t, 0, -1); add(t, 0, 1); add(-t, 0, -1); add(-t, 0, 1);
  m.faces = {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int s = 0; s < subdivisions; s++) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      int id = static_cast<int>(m.positions.size());
      m.positions.push_back((0.5 * (m.positions[a] + m.positions[b])).normalized());
      midpoint[key] = id;
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.faces.size() * 4);
    for (auto& f : m.faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.faces = std::move(next);
  }
  for (auto& p : m.positions) p *= radius;
  return m;
}

MeshData jitteredSphere(int subdivisions, double amount, uint64_t seed, double radius) {
  MeshData m = icosphere(subdivisions, 1.0);
  // mean edge length of the unit icosphere at this level
  double h = 0.0;
  int cnt = 0;
  for (auto& f : m.faces) {
    for (int c = 0; c < 3; c++) {
      h += (m.positions[f[c]] - m.positions[f[(c + 1) % 3]]).norm();
      cnt++;
    }
  }
  h /= cnt;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, amount * h);
  for (auto& p : m.positions) {
    Vec3 n = p.normalized();
    Vec3 a = n.cross(std::abs(n.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX()).normalized();
    Vec3 b = n.cross(a);
    p = (p + gauss(rng) * a + gauss(rng) * b).normalized() * radius;
  }
  return m;
}

MeshData torus(int nu, int nv, double R, double r) {
  MeshData m;
  auto id = [&](int u, int v) { return (u % nu) * nv + (v % nv); };
  for (int u = 0; u < nu; u++) {
    for (int v = 0; v < nv; v++) {
      double a = 2.0 * kPi * u / nu;
      double b = 2.0 * kPi * v / nv;
      m.positions.push_back(Vec3{(R + r * std::cos(b)) * std::cos(a),
                                 (R + r * std::cos(b)) * std::sin(a), r * std::sin(b)});
    }
  }
  for (int u = 0; u < nu; u++) {
    for (int v = 0; v < nv; v++) {
      int a = id(u, v), b = id(u + 1, v), c = id(u + 1, v + 1), d = id(u, v + 1);
      m.faces.push_back({a, b, c});
      m.faces.push_back({a, c, d});
    }
  }
  return m;
}

MeshData jitteredGrid(int n, double amount, uint64_t seed, double sideLength) {
  MeshData m = planarGrid(n, sideLength);
  double h = sideLength / n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-amount * h, amount * h);
  for (int y = 1; y < n; y++) {
    for (int x = 1; x < n; x++) {
      Vec3& p = m.positions[y * (n + 1) + x];
      p.x() += uni(rng);
      p.y() += uni(rng);
    }
  }
  return m;
}

MeshData thinStrip(int n, double aspect) {
  // sheared thin strip split along the long diagonals, so every interior
  // diagonal violates the Delaunay condition
  MeshData m;
  double w = 1.0 / (n * aspect);
  for (int x = 0; x <= n; x++) {
    m.positions.push_back(Vec3{static_cast<double>(x) / n, 0.0, 0.0});
    m.positions.push_back(Vec3{(x + 0.8) / n, w, 0.0});
  }
  for (int x = 0; x < n; x++) {
    int a = 2 * x, b = 2 * x + 1, c = 2 * x + 2, d = 2 * x + 3;
    m.faces.push_back({a, c, d});
    m.faces.push_back({a, d, b});
  }
  return m;
}

} // namespace vhm
