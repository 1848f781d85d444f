#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "glassseg/batch.hpp"
#include "glassseg/io.hpp"
#include "glassseg/maskops.hpp"
#include "oracles.hpp"

using namespace glassseg;
namespace fs = std::filesystem;

namespace {

BinaryMask square(int n, int y0, int x0, int side) {
  BinaryMask m(n, n);
  for (int y = y0; y < y0 + side; ++y)
    for (int x = x0; x < x0 + side; ++x) m.set(y, x, true);
  return m;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("glassseg_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("centered square is all internal band") {
  const auto m = square(16, 4, 4, 8);
  const auto r = decompose(m, 5, 5);
  CHECK(r.internal == m);
  CHECK(r.internal.count() == 64);
  CHECK_FALSE(r.body.any());
  CHECK(r.merged == m);
  const auto o = oracle::decompose(m, 5, 5);
  CHECK(r.external == o.external);
  CHECK(r.real_boundary == o.real);
}

TEST_CASE("unit thickness collapses every band onto the contour") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto m = oracle::random_blobs(rng, 14, 11);
    const auto r = decompose(m, 1, 1);
    CHECK(r.internal == r.real_boundary);
    CHECK(r.external == r.real_boundary);
    CHECK(r.boundary == r.real_boundary);
  }
}

TEST_CASE("empty and full masks") {
  const BinaryMask empty(8, 8);
  const auto r = decompose(empty, 3, 4);
  CHECK_FALSE(r.real_boundary.any());
  CHECK_FALSE(r.internal.any());
  CHECK_FALSE(r.external.any());
  CHECK_FALSE(r.boundary.any());
  CHECK_FALSE(r.body.any());

  const auto full = ~empty;
  const auto f = decompose(full, 3, 4);
  CHECK_FALSE(f.real_boundary.any());
  CHECK_FALSE(f.internal.any());
  CHECK(f.body == full);
}

TEST_CASE("thickness validation") {
  const BinaryMask m(4, 4);
  CHECK_THROWS_AS(decompose(m, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(decompose(m, 3, 0), std::invalid_argument);
}

TEST_CASE("half-plane band widths along the normal") {
  BinaryMask m(20, 30);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 15; ++x) m.set(y, x, true);
  for (int t_in = 1; t_in <= 7; ++t_in) {
    for (int t_ex = 1; t_ex <= 7; ++t_ex) {
      const auto r = decompose(m, t_in, t_ex);
      for (int y = 0; y < 20; ++y) {
        int n_in = 0, n_ex = 0, both = 0;
        for (int x = 0; x < 30; ++x) {
          n_in += r.internal(y, x);
          n_ex += r.external(y, x);
          both += r.internal(y, x) && r.external(y, x);
        }
        CHECK(n_in == t_in);
        CHECK(n_ex == t_ex);
        CHECK(both == 1);
      }
    }
  }
}

TEST_CASE("decompose agrees with the all-pairs oracle") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> side(1, 12), t(1, 6);
  std::uniform_real_distribution<double> p(0.1, 0.9);
  for (int i = 0; i < 200; ++i) {
    const auto m = oracle::random_mask(rng, side(rng), side(rng), p(rng));
    const int a = t(rng), b = t(rng);
    const auto r = decompose(m, a, b);
    const auto o = oracle::decompose(m, a, b);
    REQUIRE(r.real_boundary == o.real);
    REQUIRE(r.internal == o.internal);
    REQUIRE(r.external == o.external);
    REQUIRE(r.boundary == o.boundary);
    REQUIRE(r.body == o.body);
  }
}

TEST_CASE("region invariants and monotonicity on blob masks") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto m = oracle::random_blobs(rng, 32, 40);
    for (int t : {1, 3, 5, 7}) {
      const auto r = decompose(m, t, t);
      CHECK((r.internal | r.body) == m);
      CHECK_FALSE((r.internal & r.body).any());
      CHECK((r.internal & r.external) == r.real_boundary);
      CHECK(r.boundary == (r.internal | r.external));
      CHECK((r.external & m) == r.real_boundary);
      if (t < 7) CHECK(r.internal.subset_of(decompose(m, t + 1, t).internal));
    }
  }
}

TEST_CASE("squared distance transform") {
  BinaryMask t(5, 7);
  t.set(2, 3, true);
  const auto d = squared_distance_to(t);
  CHECK(d(2, 3) == 0.0);
  CHECK(d(0, 0) == 4.0 + 9.0);
  CHECK(d(4, 6) == 4.0 + 9.0);
  const auto none = squared_distance_to(BinaryMask(3, 3));
  CHECK(none(1, 1) == kUnreachable);
}

TEST_CASE("gaussian kernel") {
  const auto k = gaussian_kernel_1d(1.0, 5);
  REQUIRE(k.size() == 5);
  double sum = 0;
  for (double v : k) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k[0] == doctest::Approx(k[4]));
  CHECK_THROWS_AS(gaussian_kernel_1d(1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_kernel_1d(0.0, 5), std::invalid_argument);
}

TEST_CASE("weight map of empty region is all ones") {
  const BinaryMask z(6, 9);
  const auto w = weight_map(z, z);
  for (float v : w.values()) CHECK(v == 1.0f);
}

TEST_CASE("single pixel weight map peaks at the central kernel weight") {
  BinaryMask b(9, 9);
  b.set(4, 4, true);
  const auto w = weight_map(b, b, GaussianParams{1.0, 5});
  double s = 0;
  for (int x = -2; x <= 2; ++x) s += std::exp(-0.5 * x * x);
  const double center = 1.0 / (s * s);
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 9; ++x) {
      if (y == 4 && x == 4) {
        CHECK(w.grid()(y, x) == doctest::Approx(1.0 + center).epsilon(1e-6));
      } else {
        CHECK(w.grid()(y, x) == 1.0f);
      }
    }
}

TEST_CASE("external weight map matches a direct convolution") {
  const auto m = square(16, 4, 4, 8);
  const auto r = decompose(m, 5, 5);
  const GaussianParams g{3.0, 9};
  const auto w = weight_map(r.external, r.boundary, g);
  double s = 0;
  for (int x = -4; x <= 4; ++x) s += std::exp(-x * x / 18.0);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) {
      double conv = 0;
      for (int v = -4; v <= 4; ++v)
        for (int u = -4; u <= 4; ++u) {
          const int yy = y + v, xx = x + u;
          if (yy < 0 || yy >= 16 || xx < 0 || xx >= 16) continue;
          if (r.boundary(yy, xx)) conv += std::exp(-(v * v + u * u) / 18.0) / (s * s);
        }
      const double expect = (r.external(y, x) ? conv : 0.0) + 1.0;
      CHECK(w.grid()(y, x) == doctest::Approx(expect).epsilon(1e-5));
      CHECK((w.grid()(y, x) > 1.0f) == (r.external(y, x) && conv > 0));
    }
}

TEST_CASE("weight map is one away from the boundary band") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto m = oracle::random_blobs(rng, 30, 30);
    const auto r = decompose(m, 5, 5);
    const auto cw = contour_weights(r);
    const auto d = squared_distance_to(r.boundary);
    for (int y = 0; y < 30; ++y)
      for (int x = 0; x < 30; ++x) {
        CHECK(cw.internal.grid()(y, x) >= 1.0f);
        CHECK(cw.external.grid()(y, x) >= 1.0f);
        // Chebyshev radius 4 is within Euclidean 4·√2.
        if (d(y, x) > 32.0) {
          CHECK(cw.internal.grid()(y, x) == 1.0f);
          CHECK(cw.external.grid()(y, x) == 1.0f);
        }
      }
  }
}

TEST_CASE("weight map shape mismatch") {
  CHECK_THROWS_AS(weight_map(BinaryMask(3, 3), BinaryMask(3, 4)), ShapeMismatch);
}

TEST_CASE("batch decompose writes the documented layout") {
  const auto in = scratch("bd_in"), out = scratch("bd_out");
  std::mt19937_64 rng(2);
  for (int i = 0; i < 3; ++i) {
    write_mask_png(in / ("m" + std::to_string(i) + ".png"),
                   oracle::random_blobs(rng, 24, 20));
  }
  const auto s = batch_decompose(in, out, {});
  CHECK(s.processed == 3);
  CHECK(s.errors.empty());
  std::size_t pngs = 0, f32 = 0;
  for (const auto& e : fs::directory_iterator(out)) {
    pngs += e.path().extension() == ".png";
    f32 += e.path().extension() == ".f32";
  }
  CHECK(pngs == 15);
  CHECK(f32 == 6);

  const auto m = read_mask_png(in / "m1.png");
  const auto r = decompose(m, 5, 5);
  CHECK(read_mask_png(out / "m1.in.png") == r.internal);
  CHECK(read_mask_png(out / "m1.ex.png") == r.external);
  const auto w = read_weight_map_f32(out / "m1.wex.f32");
  CHECK(w == contour_weights(r).external.grid());
}

TEST_CASE("batch decompose on an empty directory") {
  const auto in = scratch("bd_empty"), out = scratch("bd_empty_out");
  const auto s = batch_decompose(in, out, {});
  CHECK(s.processed == 0);
  CHECK(s.errors.empty());
}

TEST_CASE("batch decompose records a non-binary mask") {
  const auto in = scratch("bd_bad"), out = scratch("bd_bad_out");
  write_probability_png(in / "gray.png",
                        ProbabilityMap(Grid<float>(4, 4, std::vector<float>(16, 0.5f))));
  const auto s = batch_decompose(in, out, {});
  CHECK(s.processed == 0);
  REQUIRE(s.errors.size() == 1);
  CHECK(s.errors[0].file.filename() == "gray.png");
}
