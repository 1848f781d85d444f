#pragma once

#include <vector>

#include "glassseg/grid.hpp"
#include "glassseg/mask.hpp"

namespace glassseg {

// The five ground-truth regions derived from a glass mask. Internal and
// external bands overlap on the one-pixel real boundary.
struct RegionDecomposition {
  BinaryMask real_boundary;
  BinaryMask internal;
  BinaryMask external;
  BinaryMask boundary;
  BinaryMask body;
  BinaryMask merged;
  int t_in = 0;
  int t_ex = 0;
};

struct GaussianParams {
  double sigma = 3.0;
  int kernel_size = 9;
};

/// Squared Euclidean distance from every pixel to the nearest set pixel of
/// `targets` (0 on the targets themselves). Pixels outside the image are
/// never targets; with no targets every value is `kUnreachable`.
Grid<double> squared_distance_to(const BinaryMask& targets);
inline constexpr double kUnreachable = 1e20;

/// Foreground pixels with at least one 4-neighbour in the background. The
/// image frame contributes no neighbours.
BinaryMask inner_contour(const BinaryMask& mask);

/// Splits `mask` into real boundary, internal band (foreground within t_in
/// of the background), external band (background within t_ex - 1 of the
/// foreground, plus the real boundary), their union and the body.
RegionDecomposition decompose(const BinaryMask& mask, int t_in, int t_ex);

/// Normalised 1-D Gaussian taps; the 2-D kernel is their outer product.
std::vector<double> gaussian_kernel_1d(double sigma, int kernel_size);

/// Zero-padded separable Gaussian blur.
Grid<double> gaussian_blur(const BinaryMask& mask, const GaussianParams& g);

/// region · blur(boundary) + 1, elementwise.
WeightMap weight_map(const BinaryMask& region, const BinaryMask& boundary,
                     const GaussianParams& g = {});

struct ContourWeights {
  WeightMap internal;
  WeightMap external;
};

ContourWeights contour_weights(const RegionDecomposition& regions,
                               const GaussianParams& g = {});

}  // namespace glassseg
