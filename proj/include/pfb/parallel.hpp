#pragma once

#include "pfb/mesh.hpp"

namespace pfb {

/// Selects the OpenMP element kernels or the serial reference loops. Both
/// produce bit-identical results: parallel kernels write per-element blocks
/// into fixed slots, and the scatter into global storage is always serial and
/// in element order.
enum class Execution { serial, parallel };

/// Runs body(i) for i in [0, n).
template <class Body>
void for_each_index(Index n, Execution execution, Body&& body) {
  if (execution == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) body(i);
  } else {
    for (Index i = 0; i < n; ++i) body(i);
  }
}

}  // namespace pfb
