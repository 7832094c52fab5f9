// Reference kernels. These define the results every other backend is
// measured against, so they stay plain loops.

#include "backends.hpp"

namespace forage::kernels::detail {
namespace {

void matvec_add(const double* w, const double* x, double* y, std::size_t rows,
                std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = w + i * cols;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
    y[i] += acc;
  }
}

void pair_weights(double cx, double cy, const double* xs, const double* ys,
                  const std::uint8_t* active, std::size_t n, const Metric& metric,
                  const KernelShape& shape, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) {
      out[i] = 0.0;
      continue;
    }
    double dx = cx - xs[i];
    double dy = cy - ys[i];
    if (metric.periodic) {
      dx = wrap_delta(dx, metric.width);
      dy = wrap_delta(dy, metric.height);
    }
    const double d2 = dx * dx + dy * dy;
    out[i] = d2 <= shape.cutoff_sq ? shape.gain / (1.0 + d2 / shape.scale_sq) : 0.0;
  }
}

FieldSample field(double cx, double cy, const double* xs, const double* ys, const double* values,
                  std::size_t n, const Metric& metric, const KernelShape& shape) {
  FieldSample f;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = cx - xs[i];
    double dy = cy - ys[i];
    if (metric.periodic) {
      dx = wrap_delta(dx, metric.width);
      dy = wrap_delta(dy, metric.height);
    }
    const double d2 = dx * dx + dy * dy;
    if (d2 > shape.cutoff_sq) continue;
    const double q = 1.0 / (1.0 + d2 / shape.scale_sq);
    const double vq = values[i] * q;
    const double coef = -2.0 * vq * q / shape.scale_sq;
    f.signal += vq;
    f.grad_x += coef * dx;
    f.grad_y += coef * dy;
  }
  return f;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", &matvec_add, &pair_weights, &field};
  return table;
}

}  // namespace forage::kernels::detail
