#include "kernels_rows.hpp"
#include "sal/kernels.hpp"

namespace sal::kernels::serial {

using detail::check_kernel;

Map separable_convolve(const Map& in, std::span<const double> kx, std::span<const double> ky) {
  check_kernel(kx);
  check_kernel(ky);
  const int w = in.width(), h = in.height();
  Map tmp(w, h);
  std::vector<char> nonzero(h, 0);
  for (int y = 0; y < h; ++y) {
    if (detail::row_is_zero(in.row(y))) continue;
    nonzero[y] = 1;
    detail::convolve_row(in.row(y), kx, tmp.row(y));
  }
  Map out(w, h);
  for (int y = 0; y < h; ++y) detail::convolve_column_row(tmp, nonzero, ky, y, out.row(y));
  return out;
}

Map normalized_convolve(const Map& in, std::span<const double> kx, std::span<const double> ky) {
  check_kernel(kx);
  check_kernel(ky);
  const int w = in.width(), h = in.height();
  if (in.empty()) return in;
  const auto mx = in_bounds_mass(kx, w);
  const auto my = in_bounds_mass(ky, h);
  const double base = in[0];

  Map tmp(w, h);
  std::vector<char> nonzero(h, 0);
  std::vector<double> centered(w);
  for (int y = 0; y < h; ++y) {
    const auto src = in.row(y);
    for (int x = 0; x < w; ++x) centered[x] = src[x] - base;
    if (detail::row_is_zero(centered)) continue;
    nonzero[y] = 1;
    auto dst = tmp.row(y);
    detail::convolve_row(centered, kx, dst);
    for (int x = 0; x < w; ++x) dst[x] /= mx[x];
  }
  Map out(w, h);
  for (int y = 0; y < h; ++y) {
    auto dst = out.row(y);
    detail::convolve_column_row(tmp, nonzero, ky, y, dst);
    for (int x = 0; x < w; ++x) dst[x] = dst[x] / my[y] + base;
  }
  return out;
}

Map resize_bilinear(const Map& in, Dims out_dims) {
  if (in.dims() == out_dims) return in;
  if (in.empty()) throw Error(ErrorCode::InvalidArgument, "cannot resize an empty map");
  const auto tx = detail::bilinear_taps(in.width(), out_dims.width);
  const auto ty = detail::bilinear_taps(in.height(), out_dims.height);
  Map out(out_dims);
  for (int y = 0; y < out_dims.height; ++y) {
    const auto r0 = in.row(ty[y].i0);
    const auto r1 = in.row(ty[y].i1);
    const double fy = ty[y].f;
    for (int x = 0; x < out_dims.width; ++x) {
      const auto& t = tx[x];
      const double top = r0[t.i0] + t.f * (r0[t.i1] - r0[t.i0]);
      const double bot = r1[t.i0] + t.f * (r1[t.i1] - r1[t.i0]);
      out(x, y) = top + fy * (bot - top);
    }
  }
  return out;
}

Map downscale_area(const Map& in, Dims out_dims) {
  if (in.dims() == out_dims) return in;
  if (in.empty() || out_dims.width <= 0 || out_dims.height <= 0)
    throw Error(ErrorCode::InvalidArgument, "cannot resample an empty map");
  const auto ax = detail::area_weights(in.width(), out_dims.width);
  const auto ay = detail::area_weights(in.height(), out_dims.height);
  Map rows(out_dims.width, in.height());
  for (int y = 0; y < in.height(); ++y) {
    const auto src = in.row(y);
    for (int x = 0; x < out_dims.width; ++x) {
      double acc = 0.0;
      for (int j = ax.begin[x]; j < ax.begin[x + 1]; ++j) acc += ax.w[j] * src[ax.idx[j]];
      rows(x, y) = acc;
    }
  }
  Map out(out_dims);
  for (int y = 0; y < out_dims.height; ++y) {
    auto dst = out.row(y);
    for (int j = ay.begin[y]; j < ay.begin[y + 1]; ++j) {
      const auto src = rows.row(ay.idx[j]);
      const double w = ay.w[j];
      for (int x = 0; x < out_dims.width; ++x) dst[x] += w * src[x];
    }
  }
  return out;
}

}  // namespace sal::kernels::serial
