#include "vhm/solver.h"

#include <atomic>
#include <vector>

namespace vhm {

namespace {
std::atomic<long> factorizations{0};
}

namespace detail {
void countFactorization() { factorizations.fetch_add(1, std::memory_order_relaxed); }
}

long factorizationCount() { return factorizations.load(std::memory_order_relaxed); }

void resetFactorizationCount() { factorizations.store(0, std::memory_order_relaxed); }

SparseReal pinVertex(const SparseReal& A, int vertex) {
  if (vertex < 0 || vertex >= A.rows()) throw Error("pinned vertex out of range");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(A.nonZeros()) + 1);
  for (int c = 0; c < A.outerSize(); c++) {
    for (SparseReal::InnerIterator it(A, c); it; ++it) {
      if (it.row() == vertex || it.col() == vertex) continue;
      trip.emplace_back(it.row(), it.col(), it.value());
    }
  }
  trip.emplace_back(vertex, vertex, 1.0);
  SparseReal out(A.rows(), A.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

} // namespace vhm
