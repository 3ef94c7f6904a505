#pragma once

// Per-row building blocks shared by the serial and OpenMP kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "sal/grid.hpp"

namespace sal::kernels::detail {

inline bool row_is_zero(std::span<const double> row) {
  for (double v : row)
    if (v != 0.0) return false;
  return true;
}

// out[x] = sum_k taps[k] * in[x + k - r], zero outside.
inline void convolve_row(std::span<const double> in, std::span<const double> taps, std::span<double> out) {
  const int n = static_cast<int>(in.size());
  const int r = static_cast<int>(taps.size() / 2);
  for (int x = 0; x < n; ++x) {
    const int k0 = std::max(0, r - x);
    const int k1 = std::min(static_cast<int>(taps.size()), n - x + r);
    double acc = 0.0;
    for (int k = k0; k < k1; ++k) acc += taps[k] * in[x + k - r];
    out[x] = acc;
  }
}

// Accumulates the vertical pass for output row y from the nonzero rows of tmp.
inline void convolve_column_row(const Map& tmp, const std::vector<char>& nonzero, std::span<const double> taps, int y,
                                std::span<double> out) {
  const int h = tmp.height();
  const int r = static_cast<int>(taps.size() / 2);
  std::fill(out.begin(), out.end(), 0.0);
  for (int k = 0; k < static_cast<int>(taps.size()); ++k) {
    const int sy = y + k - r;
    if (sy < 0 || sy >= h || !nonzero[sy]) continue;
    const double w = taps[k];
    const auto src = tmp.row(sy);
    for (std::size_t x = 0; x < out.size(); ++x) out[x] += w * src[x];
  }
}

struct AxisWeights {
  // For each output index: contributing source indices and weights.
  std::vector<int> begin;  // offsets into idx/w, size n_out + 1
  std::vector<int> idx;
  std::vector<double> w;
};

inline AxisWeights area_weights(int n_in, int n_out) {
  AxisWeights aw;
  aw.begin.reserve(n_out + 1);
  const double scale = static_cast<double>(n_in) / n_out;
  for (int o = 0; o < n_out; ++o) {
    aw.begin.push_back(static_cast<int>(aw.idx.size()));
    const double a = o * scale;
    const double b = (o + 1) * scale;
    const int i0 = static_cast<int>(std::floor(a));
    const int i1 = std::min(n_in, static_cast<int>(std::ceil(b)));
    for (int i = i0; i < i1; ++i) {
      const double overlap = std::min(b, i + 1.0) - std::max(a, static_cast<double>(i));
      if (overlap <= 0.0) continue;
      aw.idx.push_back(i);
      aw.w.push_back(overlap / scale);
    }
  }
  aw.begin.push_back(static_cast<int>(aw.idx.size()));
  return aw;
}

struct LinearTap {
  int i0, i1;
  double f;
};

inline std::vector<LinearTap> bilinear_taps(int n_in, int n_out) {
  std::vector<LinearTap> taps(n_out);
  const double scale = static_cast<double>(n_in) / n_out;
  for (int o = 0; o < n_out; ++o) {
    double s = (o + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(n_in - 1));
    const int i0 = static_cast<int>(std::floor(s));
    const int i1 = std::min(i0 + 1, n_in - 1);
    taps[o] = {i0, i1, s - i0};
  }
  return taps;
}

inline void check_kernel(std::span<const double> k) {
  if (k.empty() || k.size() % 2 == 0) throw Error(ErrorCode::InvalidArgument, "kernel length must be odd");
}

}  // namespace sal::kernels::detail
