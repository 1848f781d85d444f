#include "glassseg/maskops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace glassseg {

namespace {

// Felzenszwalb & Huttenlocher lower envelope of parabolas, one scan line.
// `f` holds squared distances along the line; `out` receives the result.
void edt_1d(const std::vector<double>& f, std::vector<double>& out,
            std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -kUnreachable;
  z[1] = kUnreachable;
  auto intersect = [&](int q, int p) {
    return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
  };
  for (int q = 1; q < n; ++q) {
    // z[0] is -inf in effect: finite rows keep s far above -kUnreachable.
    double s = intersect(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kUnreachable;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double d = double(q - v[k]);
    out[q] = std::min(kUnreachable, d * d + f[v[k]]);
  }
}

}  // namespace

Grid<double> squared_distance_to(const BinaryMask& targets) {
  const int h = targets.height();
  const int w = targets.width();
  Grid<double> dist(h, w, kUnreachable);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (targets(y, x)) dist(y, x) = 0.0;
    }
  }

  const int n = std::max(h, w);
  std::vector<double> f(n), out(n), z(n + 1);
  std::vector<int> v(n);

  f.resize(h);
  out.resize(h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = dist(y, x);
    edt_1d(f, out, v, z);
    for (int y = 0; y < h; ++y) dist(y, x) = out[y];
  }
  f.resize(w);
  out.resize(w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f[x] = dist(y, x);
    edt_1d(f, out, v, z);
    for (int x = 0; x < w; ++x) dist(y, x) = out[x];
  }
  return dist;
}

BinaryMask inner_contour(const BinaryMask& mask) {
  const int h = mask.height();
  const int w = mask.width();
  BinaryMask out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask(y, x)) continue;
      const bool touches_bg = (y > 0 && !mask(y - 1, x)) ||
                              (y + 1 < h && !mask(y + 1, x)) ||
                              (x > 0 && !mask(y, x - 1)) ||
                              (x + 1 < w && !mask(y, x + 1));
      out.set(y, x, touches_bg);
    }
  }
  return out;
}

RegionDecomposition decompose(const BinaryMask& mask, int t_in, int t_ex) {
  if (t_in < 1 || t_ex < 1) {
    throw std::invalid_argument("band thicknesses must be >= 1, got t_in=" +
                                std::to_string(t_in) +
                                " t_ex=" + std::to_string(t_ex));
  }
  const int h = mask.height();
  const int w = mask.width();
  const Grid<double> to_background = squared_distance_to(~mask);
  const Grid<double> to_foreground = squared_distance_to(mask);

  const double in_limit = double(t_in) * t_in;
  const double ex_limit = double(t_ex - 1) * (t_ex - 1);

  RegionDecomposition r{
      .real_boundary = inner_contour(mask),
      .internal = BinaryMask(h, w),
      .external = BinaryMask(h, w),
      .boundary = BinaryMask(h, w),
      .body = BinaryMask(h, w),
      .merged = mask,
      .t_in = t_in,
      .t_ex = t_ex,
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask(y, x)) {
        const bool in_band = to_background(y, x) <= in_limit;
        r.internal.set(y, x, in_band);
        r.body.set(y, x, !in_band);
        r.external.set(y, x, r.real_boundary(y, x));
      } else {
        r.external.set(y, x, to_foreground(y, x) <= ex_limit);
      }
    }
  }
  r.boundary = r.internal | r.external;
  return r;
}

std::vector<double> gaussian_kernel_1d(double sigma, int kernel_size) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("gaussian sigma must be positive");
  }
  if (kernel_size < 1 || kernel_size % 2 == 0) {
    throw std::invalid_argument("gaussian kernel size must be odd, got " +
                                std::to_string(kernel_size));
  }
  const int radius = kernel_size / 2;
  std::vector<double> taps(kernel_size);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    taps[i + radius] = std::exp(-(double(i) * i) / (2.0 * sigma * sigma));
    sum += taps[i + radius];
  }
  for (auto& t : taps) t /= sum;
  return taps;
}

Grid<double> gaussian_blur(const BinaryMask& mask, const GaussianParams& g) {
  const auto taps = gaussian_kernel_1d(g.sigma, g.kernel_size);
  const int radius = g.kernel_size / 2;
  const int h = mask.height();
  const int w = mask.width();

  Grid<double> rows(h, w, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int xx = x + k;
        if (xx >= 0 && xx < w && mask(y, xx)) acc += taps[k + radius];
      }
      rows(y, x) = acc;
    }
  }
  Grid<double> out(h, w, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int yy = y + k;
        if (yy >= 0 && yy < h) acc += taps[k + radius] * rows(yy, x);
      }
      out(y, x) = acc;
    }
  }
  return out;
}

WeightMap weight_map(const BinaryMask& region, const BinaryMask& boundary,
                     const GaussianParams& g) {
  require_same_shape(region.grid(), boundary.grid(), "weight_map");
  const Grid<double> smooth = gaussian_blur(boundary, g);
  Grid<float> out(region.height(), region.width(), 1.0f);
  for (int y = 0; y < region.height(); ++y) {
    for (int x = 0; x < region.width(); ++x) {
      if (region(y, x)) out(y, x) = static_cast<float>(smooth(y, x) + 1.0);
    }
  }
  return WeightMap(std::move(out));
}

ContourWeights contour_weights(const RegionDecomposition& regions,
                               const GaussianParams& g) {
  return {weight_map(regions.internal, regions.boundary, g),
          weight_map(regions.external, regions.boundary, g)};
}

}  // namespace glassseg
