#pragma once

// Data-parallel image kernels. Every kernel has a serial reference in
// sal::kernels::serial and an OpenMP version in sal::kernels::parallel;
// both evaluate the same per-pixel expressions in the same order, so their
// outputs are bit-identical. The unqualified entry points dispatch on Exec.

#include <span>
#include <vector>

#include "sal/grid.hpp"

namespace sal::kernels {

enum class Exec { Serial, Parallel };

// Gaussian taps truncated at ceil(3 sigma), normalized to unit sum.
std::vector<double> gaussian_taps(double sigma);

// For each index i in [0, n), the sum of taps that land inside [0, n) when
// the (odd-length, centered) kernel is placed at i.
std::vector<double> in_bounds_mass(std::span<const double> taps, int n);

namespace serial {
Map separable_convolve(const Map& in, std::span<const double> kx, std::span<const double> ky);
Map normalized_convolve(const Map& in, std::span<const double> kx, std::span<const double> ky);
Map resize_bilinear(const Map& in, Dims out);
Map downscale_area(const Map& in, Dims out);
}  // namespace serial

namespace parallel {
Map separable_convolve(const Map& in, std::span<const double> kx, std::span<const double> ky);
Map normalized_convolve(const Map& in, std::span<const double> kx, std::span<const double> ky);
Map resize_bilinear(const Map& in, Dims out);
Map downscale_area(const Map& in, Dims out);
}  // namespace parallel

// Zero-padded separable convolution. Input rows that are entirely zero are
// skipped, which makes sparse inputs (fixation maps) cheap.
Map separable_convolve(const Map& in, std::span<const double> kx, std::span<const double> ky,
                       Exec exec = Exec::Parallel);

// Convolution renormalized per output pixel by the kernel mass that falls
// inside the grid. A constant input maps to exactly the same constant.
Map normalized_convolve(const Map& in, std::span<const double> kx, std::span<const double> ky,
                        Exec exec = Exec::Parallel);

Map gaussian_blur(const Map& in, double sigma, Exec exec = Exec::Parallel);

// Bilinear resampling with pixel-center alignment and edge clamping.
// Equal dimensions return an exact copy.
Map resize_bilinear(const Map& in, Dims out, Exec exec = Exec::Parallel);

// Exact area-averaging resampler (each output pixel is the mean of the
// source area it covers). Intended for downscaling.
Map downscale_area(const Map& in, Dims out, Exec exec = Exec::Parallel);

// Sets the thread count used by the parallel kernels (no-op without OpenMP).
void set_num_threads(int n);
int max_threads();

}  // namespace sal::kernels
