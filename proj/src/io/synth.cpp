#include "glassseg/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <opencv2/imgproc.hpp>

#include "glassseg/io.hpp"

namespace glassseg {

std::string to_string(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::framed_window: return "framed_window";
    case FixtureKind::frameless_cup: return "frameless_cup";
    case FixtureKind::mixed_scene: return "mixed_scene";
  }
  return "mixed_scene";
}

FixtureKind parse_fixture_kind(const std::string& text) {
  if (text == "framed_window") return FixtureKind::framed_window;
  if (text == "frameless_cup") return FixtureKind::frameless_cup;
  if (text == "mixed_scene") return FixtureKind::mixed_scene;
  throw std::invalid_argument("unknown fixture kind '" + text + "'");
}

namespace {

// Platform-independent draws on top of mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (double(engine_() >> 11) * 0x1.0p-53);
  }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(engine_() % std::uint64_t(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

using Rgb = std::array<float, 3>;

struct Rect {
  int x0, y0, w, h;  // interior, excluding the frame
};

struct Ellipse {
  double cx, cy, a, b;
};

RgbImage blur(const RgbImage& image, double sigma) {
  RgbImage out(image.height(), image.width());
  const std::size_t plane = std::size_t(image.height()) * image.width();
  for (int c = 0; c < 3; ++c) {
    cv::Mat src(image.height(), image.width(), CV_32FC1,
                const_cast<float*>(image.values().data()) + c * plane);
    cv::Mat dst(image.height(), image.width(), CV_32FC1,
                out.values().data() + c * plane);
    cv::GaussianBlur(src, dst, cv::Size(0, 0), sigma, sigma,
                     cv::BORDER_REFLECT101);
  }
  return out;
}

float sample_bilinear(const RgbImage& img, int c, double y, double x) {
  y = std::clamp(y, 0.0, double(img.height() - 1));
  x = std::clamp(x, 0.0, double(img.width() - 1));
  const int y0 = static_cast<int>(std::floor(y));
  const int x0 = static_cast<int>(std::floor(x));
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const double fy = y - y0;
  const double fx = x - x0;
  return static_cast<float>(
      (1 - fy) * ((1 - fx) * img.at(c, y0, x0) + fx * img.at(c, y0, x1)) +
      fy * ((1 - fx) * img.at(c, y1, x0) + fx * img.at(c, y1, x1)));
}

RgbImage render_background(int size, Rng& rng) {
  RgbImage img(size, size);
  Rgb base{};
  for (auto& b : base) b = static_cast<float>(rng.uniform(0.3, 0.7));

  struct Wave {
    double kx, ky, phase;
    Rgb amp;
  };
  std::array<Wave, 4> waves{};
  for (auto& w : waves) {
    const double freq = rng.uniform(0.5, 3.5) * 2.0 * std::numbers::pi / size;
    const double angle = rng.uniform(0.0, std::numbers::pi);
    w.kx = freq * std::cos(angle);
    w.ky = freq * std::sin(angle);
    w.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (auto& a : w.amp) a = static_cast<float>(rng.uniform(0.03, 0.08));
  }
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      for (int c = 0; c < 3; ++c) {
        double v = base[c];
        for (const auto& w : waves) {
          v += w.amp[c] * std::sin(w.kx * x + w.ky * y + w.phase);
        }
        img.at(c, y, x) = static_cast<float>(v + rng.uniform(-0.06, 0.06));
      }
    }
  }
  img = blur(img, 1.0);

  // Soft-edged clutter blobs: background structure that is not glass.
  const int blobs = rng.integer(2, 3);
  for (int i = 0; i < blobs; ++i) {
    const double cx = rng.uniform(0, size);
    const double cy = rng.uniform(0, size);
    const double r = rng.uniform(0.06, 0.14) * size;
    Rgb shift{};
    for (auto& s : shift) s = static_cast<float>(rng.uniform(-0.18, 0.18));
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const double d = std::hypot(x - cx, y - cy);
        const double t = std::clamp((r - d) / 3.0, 0.0, 1.0);
        for (int c = 0; c < 3; ++c) img.at(c, y, x) += float(t * shift[c]);
      }
    }
  }
  for (auto& v : img.values()) v = std::clamp(v, 0.0f, 1.0f);
  return img;
}

Rgb frame_color(Rng& rng) {
  Rgb c{};
  const double level = rng.uniform(0.04, 0.16);
  for (auto& v : c) v = static_cast<float>(level + rng.uniform(0.0, 0.08));
  return c;
}

void draw_frame(RgbImage& img, BinaryMask& frame, const Rect& r, int thickness,
                const Rgb& color) {
  for (int y = r.y0 - thickness; y < r.y0 + r.h + thickness; ++y) {
    for (int x = r.x0 - thickness; x < r.x0 + r.w + thickness; ++x) {
      const bool inside = y >= r.y0 && y < r.y0 + r.h && x >= r.x0 &&
                          x < r.x0 + r.w;
      if (inside) continue;
      // Bevel: the top and left bars catch light.
      const float bevel = (y < r.y0 || x < r.x0) ? 0.05f : 0.0f;
      for (int c = 0; c < 3; ++c) img.at(c, y, x) = color[c] + bevel;
      frame.set(y, x, true);
    }
  }
}

void draw_window(RgbImage& img, const RgbImage& background, Fixture& fx,
                 const Rect& r, int thickness, Rng& rng) {
  const RgbImage soft = blur(background, 2.0);
  const Rgb tint{0.70f, 0.85f, 0.95f};
  const double streak_offset = rng.uniform(0.2, 0.8) * r.w;
  const double streak_width = rng.uniform(3.0, 6.0);
  for (int y = r.y0; y < r.y0 + r.h; ++y) {
    for (int x = r.x0; x < r.x0 + r.w; ++x) {
      const double s = (x - r.x0) - 0.7 * (y - r.y0) - streak_offset;
      const float streak = std::abs(s) < streak_width ? 0.10f : 0.0f;
      for (int c = 0; c < 3; ++c) {
        img.at(c, y, x) = std::clamp(
            0.55f * soft.at(c, y, x) + 0.45f * tint[c] + streak, 0.0f, 1.0f);
      }
      fx.mask.set(y, x, true);
    }
  }
  draw_frame(img, fx.frame, r, thickness, frame_color(rng));
}

void draw_cup(RgbImage& img, const RgbImage& background, Fixture& fx,
              const Ellipse& e) {
  const RgbImage soft = blur(background, 1.0);
  const Rgb tint{0.75f, 0.90f, 1.00f};
  constexpr double kRim = 5.0;
  const double minor = std::min(e.a, e.b);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double dx = x - e.cx;
      const double dy = y - e.cy;
      const double r = std::hypot(dx / e.a, dy / e.b);
      if (r >= 1.0) continue;
      const double edge = (1.0 - r) * minor;
      const double k = std::max(0.0, 1.0 - edge / kRim);
      // Lens-like magnification, with a sharp compression at the rim so the
      // refracted content breaks from the surrounding background.
      const double m = 0.7 + 0.3 * r * r - 0.25 * k;
      for (int c = 0; c < 3; ++c) {
        double v = 0.8 * sample_bilinear(soft, c, e.cy + dy * m, e.cx + dx * m) +
                   0.2 * tint[c];
        v += 0.3 * k * k;
        if (edge < 1.2) v *= 0.7;
        img.at(c, y, x) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
      fx.mask.set(y, x, true);
    }
  }
}

Rect random_rect(int size, double lo, double hi, int margin, Rng& rng) {
  Rect r{};
  r.w = static_cast<int>(rng.uniform(lo, hi) * size);
  r.h = static_cast<int>(rng.uniform(lo, hi) * size);
  r.x0 = rng.integer(margin, size - r.w - margin);
  r.y0 = rng.integer(margin, size - r.h - margin);
  return r;
}

struct Box {
  int x0, y0, x1, y1;  // inclusive-exclusive, with clearance included
  bool overlaps(const Box& o) const {
    return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
  }
};

Fixture empty_fixture(int size) {
  return Fixture{RgbImage(size, size), BinaryMask(size, size),
                 BinaryMask(size, size), BinaryMask(size, size), ""};
}

Fixture render_window(int size, Rng& rng) {
  Fixture fx = empty_fixture(size);
  const RgbImage background = render_background(size, rng);
  fx.image = background;
  const int thickness = rng.integer(4, 6);
  const Rect r = random_rect(size, 0.35, 0.6, thickness + 3, rng);
  draw_window(fx.image, background, fx, r, thickness, rng);
  fx.category = "stuff";
  return fx;
}

Fixture render_cup(int size, Rng& rng) {
  Fixture fx = empty_fixture(size);
  const RgbImage background = render_background(size, rng);
  fx.image = background;
  Ellipse e{};
  e.a = rng.uniform(0.18, 0.3) * size;
  e.b = rng.uniform(0.18, 0.3) * size;
  e.cx = rng.uniform(e.a + 3, size - e.a - 3);
  e.cy = rng.uniform(e.b + 3, size - e.b - 3);
  draw_cup(fx.image, background, fx, e);
  fx.category = "things";
  return fx;
}

Fixture render_mixed(int size, Rng& rng) {
  Fixture fx = empty_fixture(size);
  const RgbImage background = render_background(size, rng);
  fx.image = background;

  const int clearance = 3;
  std::vector<Box> taken;
  auto place = [&](int w, int h, int pad) -> std::pair<int, int> {
    for (int attempt = 0; attempt < 2000; ++attempt) {
      const int x0 = rng.integer(pad + clearance, size - w - pad - clearance);
      const int y0 = rng.integer(pad + clearance, size - h - pad - clearance);
      const Box box{x0 - pad - clearance, y0 - pad - clearance,
                    x0 + w + pad + clearance, y0 + h + pad + clearance};
      if (std::none_of(taken.begin(), taken.end(),
                       [&](const Box& b) { return b.overlaps(box); })) {
        taken.push_back(box);
        return {x0, y0};
      }
    }
    return {-1, -1};
  };

  // Shrink everything until all three objects fit without overlap.
  for (double scale = 1.0; scale > 0.3; scale *= 0.9) {
    taken.clear();
    const int ft = rng.integer(4, 5);
    const int ww = static_cast<int>(rng.uniform(0.3, 0.42) * size * scale);
    const int wh = static_cast<int>(rng.uniform(0.3, 0.42) * size * scale);
    const double ca = rng.uniform(0.11, 0.17) * size * scale;
    const double cb = rng.uniform(0.11, 0.17) * size * scale;
    const int dw = static_cast<int>(rng.uniform(0.2, 0.3) * size * scale);
    const int dh = static_cast<int>(rng.uniform(0.2, 0.3) * size * scale);

    const auto [wx, wy] = place(ww, wh, ft);
    if (wx < 0) continue;
    const int cw = static_cast<int>(std::ceil(2 * ca));
    const int ch = static_cast<int>(std::ceil(2 * cb));
    const auto [cx, cy] = place(cw, ch, 0);
    if (cx < 0) continue;
    const auto [dx, dy] = place(dw, dh, ft);
    if (dx < 0) continue;

    draw_window(fx.image, background, fx, Rect{wx, wy, ww, wh}, ft, rng);
    draw_cup(fx.image, background, fx,
             Ellipse{cx + cw / 2.0, cy + ch / 2.0, ca, cb});
    BinaryMask distractor_frame(size, size);
    const Rect d{dx, dy, dw, dh};
    draw_frame(fx.image, distractor_frame, d, ft, frame_color(rng));
    for (int y = d.y0; y < d.y0 + d.h; ++y) {
      for (int x = d.x0; x < d.x0 + d.w; ++x) fx.distractor.set(y, x, true);
    }
    fx.category = "mixed";
    return fx;
  }
  throw std::runtime_error("mixed_scene: could not place objects");
}

}  // namespace

Fixture synth_fixture(FixtureKind kind, int size, std::uint64_t seed) {
  if (size < 64) {
    throw std::invalid_argument("fixture size must be at least 64, got " +
                                std::to_string(size));
  }
  Rng rng(seed);
  switch (kind) {
    case FixtureKind::framed_window: return render_window(size, rng);
    case FixtureKind::frameless_cup: return render_cup(size, rng);
    case FixtureKind::mixed_scene: return render_mixed(size, rng);
  }
  throw std::invalid_argument("unknown fixture kind");
}

std::uint64_t item_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<Fixture> synth_fixtures(const SynthSpec& spec) {
  if (spec.count < 0) throw std::invalid_argument("fixture count must be >= 0");
  std::vector<Fixture> out;
  out.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    const std::uint64_t s = item_seed(spec.seed, i);
    FixtureKind kind = spec.kind;
    if (kind != FixtureKind::mixed_scene && spec.minority_fraction > 0.0) {
      Rng pick(s ^ 0xA5A5A5A5ULL);
      if (pick.uniform(0.0, 1.0) < spec.minority_fraction) {
        kind = kind == FixtureKind::framed_window ? FixtureKind::frameless_cup
                                                  : FixtureKind::framed_window;
      }
    }
    out.push_back(synth_fixture(kind, spec.size, s));
  }
  return out;
}

namespace {

std::string item_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d.png", index);
  return buf;
}

}  // namespace

std::vector<RawSample> synth_dataset(const SynthSpec& spec) {
  auto fixtures = synth_fixtures(spec);
  std::vector<RawSample> out;
  out.reserve(fixtures.size());
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    auto& f = fixtures[i];
    out.push_back(RawSample{item_name(static_cast<int>(i)), std::move(f.image),
                            std::move(f.mask), f.category});
  }
  return out;
}

void write_synth_dataset(const fs::path& out, const SynthSpec& spec) {
  fs::create_directories(out / "images");
  fs::create_directories(out / "masks");
  std::ofstream categories(out / "categories.tsv");
  const auto fixtures = synth_fixtures(spec);
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const std::string name = item_name(static_cast<int>(i));
    write_image(out / "images" / name, fixtures[i].image);
    write_mask_png(out / "masks" / name, fixtures[i].mask);
    categories << name << '\t' << fixtures[i].category << '\n';
  }
}

}  // namespace glassseg
