#include "sal/kernels.hpp"

#include <cmath>

#ifdef SAL_HAVE_OPENMP
#include <omp.h>
#endif

namespace sal::kernels {

std::vector<double> gaussian_taps(double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gaussian sigma must be positive");
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * r + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    taps[i + r] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += taps[i + r];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

std::vector<double> in_bounds_mass(std::span<const double> taps, int n) {
  const int r = static_cast<int>(taps.size() / 2);
  std::vector<double> mass(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double m = 0.0;
    for (int k = 0; k < static_cast<int>(taps.size()); ++k) {
      const int j = i + k - r;
      if (j >= 0 && j < n) m += taps[k];
    }
    mass[i] = m;
  }
  return mass;
}

Map separable_convolve(const Map& in, std::span<const double> kx, std::span<const double> ky, Exec exec) {
  return exec == Exec::Serial ? serial::separable_convolve(in, kx, ky) : parallel::separable_convolve(in, kx, ky);
}

Map normalized_convolve(const Map& in, std::span<const double> kx, std::span<const double> ky, Exec exec) {
  return exec == Exec::Serial ? serial::normalized_convolve(in, kx, ky) : parallel::normalized_convolve(in, kx, ky);
}

Map gaussian_blur(const Map& in, double sigma, Exec exec) {
  const auto taps = gaussian_taps(sigma);
  return normalized_convolve(in, taps, taps, exec);
}

Map resize_bilinear(const Map& in, Dims out, Exec exec) {
  return exec == Exec::Serial ? serial::resize_bilinear(in, out) : parallel::resize_bilinear(in, out);
}

Map downscale_area(const Map& in, Dims out, Exec exec) {
  return exec == Exec::Serial ? serial::downscale_area(in, out) : parallel::downscale_area(in, out);
}

void set_num_threads(int n) {
#ifdef SAL_HAVE_OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef SAL_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace sal::kernels
