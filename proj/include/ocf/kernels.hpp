#pragma once

#include <cstddef>

namespace ocf::kernels {

// Distance rows between one probe point x (p values) and n candidate rows
// stored row-major in `rows`:
//   squared_distances: out[i] = sum over q of (x[q] - rows[i*p+q])^2
//   l1_distances:      out[i] = sum over q of |x[q] - rows[i*p+q]|
//
// The plain entry points dispatch once per process to the fastest variant
// the running CPU supports; the _scalar variants are the portable reference
// implementations the dispatched ones are equivalence-tested against.
// Vectorized accumulation may round differently in the last bits, so
// comparisons belong at tolerance, not bit equality.

void squared_distances_scalar(const double* x, const double* rows, std::size_t n,
                              std::size_t p, double* out);
void l1_distances_scalar(const double* x, const double* rows, std::size_t n, std::size_t p,
                         double* out);

void squared_distances(const double* x, const double* rows, std::size_t n, std::size_t p,
                       double* out);
void l1_distances(const double* x, const double* rows, std::size_t n, std::size_t p,
                  double* out);

// Which implementation the dispatcher picked: "avx2" or "scalar".
const char* active_backend();

}  // namespace ocf::kernels
