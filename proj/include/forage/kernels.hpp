#pragma once

// Data-parallel inner loops. Each backend (scalar reference, AVX2) exports
// the same table; the engine picks one at startup and tests hold every
// backend to the scalar reference.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace forage::kernels {

/// Distance metric of the world: plain Euclidean, or minimum-image on a
/// torus of the given extent.
struct Metric {
  double width = 0.0;
  double height = 0.0;
  bool periodic = false;
};

/// Rational harvest kernel gain / (1 + d^2 / scale^2), zero beyond cutoff.
struct KernelShape {
  double gain = 1.0;
  double scale_sq = 1.0;
  double cutoff_sq = 0.0;
};

struct FieldSample {
  double signal = 0.0;
  double grad_x = 0.0;
  double grad_y = 0.0;
};

struct KernelTable {
  std::string_view name;

  /// y[i] += sum_j w[i * cols + j] * x[j]
  void (*matvec_add)(const double* w, const double* x, double* y, std::size_t rows,
                     std::size_t cols);

  /// out[i] = kernel weight between (cx, cy) and point i, zero where
  /// active[i] == 0. Bit-identical across backends.
  void (*pair_weights)(double cx, double cy, const double* xs, const double* ys,
                       const std::uint8_t* active, std::size_t n, const Metric& metric,
                       const KernelShape& shape, double* out);

  /// Value-weighted kernel field at (cx, cy): signal = sum_i v_i k_i with
  /// k_i = 1 / (1 + d_i^2 / scale^2) inside the cutoff, and its gradient
  /// with respect to (cx, cy). `shape.gain` is ignored.
  FieldSample (*field)(double cx, double cy, const double* xs, const double* ys,
                       const double* values, std::size_t n, const Metric& metric,
                       const KernelShape& shape);
};

const KernelTable& scalar();

/// nullptr when the build or the running CPU lacks AVX2+FMA.
const KernelTable* avx2();

/// Every backend usable on this machine, scalar first.
std::vector<const KernelTable*> available();

/// Backend chosen once per process: FORAGE_KERNELS=scalar|avx2 if set and
/// available, otherwise the widest available.
const KernelTable& active();

/// Minimum-image displacement along one axis; |d| < extent assumed.
inline double wrap_delta(double d, double extent) {
  const double half = 0.5 * extent;
  if (d > half) return d - extent;
  if (d < -half) return d + extent;
  return d;
}

}  // namespace forage::kernels
