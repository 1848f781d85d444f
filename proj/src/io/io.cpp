#include "glassseg/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace glassseg {

namespace {

cv::Mat read_raw(const fs::path& path, int flags) {
  cv::Mat m = cv::imread(path.string(), flags);
  if (m.empty()) throw FormatError("cannot read image " + path.string());
  return m;
}

void write_raw(const fs::path& path, const cv::Mat& m) {
  if (!cv::imwrite(path.string(), m)) {
    throw FormatError("cannot write image " + path.string());
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<unsigned char, 4> b{
      static_cast<unsigned char>(v & 0xFF),
      static_cast<unsigned char>((v >> 8) & 0xFF),
      static_cast<unsigned char>((v >> 16) & 0xFF),
      static_cast<unsigned char>((v >> 24) & 0xFF)};
  out.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) |
         (std::uint32_t(b[2]) << 16) | (std::uint32_t(b[3]) << 24);
}

}  // namespace

BinaryMask read_mask_png(const fs::path& path) {
  cv::Mat m = read_raw(path, cv::IMREAD_UNCHANGED);
  if (m.channels() != 1 || m.depth() != CV_8U) {
    throw FormatError(path.string() + ": mask must be 8-bit single-channel");
  }
  BinaryMask mask(m.rows, m.cols);
  for (int y = 0; y < m.rows; ++y) {
    const auto* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < m.cols; ++x) {
      if (row[x] != 0 && row[x] != 255) {
        throw FormatError(path.string() + ": mask value " +
                          std::to_string(row[x]) + " at (" +
                          std::to_string(y) + "," + std::to_string(x) +
                          ") is neither 0 nor 255");
      }
      mask.set(y, x, row[x] == 255);
    }
  }
  return mask;
}

void write_mask_png(const fs::path& path, const BinaryMask& mask) {
  cv::Mat m(mask.height(), mask.width(), CV_8UC1);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      m.at<std::uint8_t>(y, x) = mask(y, x) ? 255 : 0;
    }
  }
  write_raw(path, m);
}

RgbImage read_image(const fs::path& path) {
  cv::Mat m = read_raw(path, cv::IMREAD_COLOR);
  cv::Mat rgb;
  cv::cvtColor(m, rgb, cv::COLOR_BGR2RGB);
  RgbImage img(rgb.rows, rgb.cols);
  for (int y = 0; y < rgb.rows; ++y) {
    const auto* row = rgb.ptr<cv::Vec3b>(y);
    for (int x = 0; x < rgb.cols; ++x) {
      for (int c = 0; c < 3; ++c) img.at(c, y, x) = row[x][c] / 255.0f;
    }
  }
  return img;
}

void write_image(const fs::path& path, const RgbImage& image) {
  cv::Mat m(image.height(), image.width(), CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = m.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width(); ++x) {
      // OpenCV stores BGR.
      for (int c = 0; c < 3; ++c) {
        const float v = std::clamp(image.at(2 - c, y, x), 0.0f, 1.0f);
        row[x][c] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
      }
    }
  }
  write_raw(path, m);
}

ProbabilityMap read_probability_png(const fs::path& path) {
  cv::Mat m = read_raw(path, cv::IMREAD_UNCHANGED);
  if (m.channels() != 1 || m.depth() != CV_8U) {
    throw FormatError(path.string() +
                      ": probability map must be 8-bit single-channel");
  }
  Grid<float> g(m.rows, m.cols, 0.0f);
  for (int y = 0; y < m.rows; ++y) {
    for (int x = 0; x < m.cols; ++x) g(y, x) = m.at<std::uint8_t>(y, x) / 255.0f;
  }
  return ProbabilityMap(std::move(g));
}

void write_probability_png(const fs::path& path, const ProbabilityMap& prob) {
  cv::Mat m(prob.height(), prob.width(), CV_8UC1);
  for (int y = 0; y < prob.height(); ++y) {
    for (int x = 0; x < prob.width(); ++x) {
      m.at<std::uint8_t>(y, x) =
          static_cast<std::uint8_t>(std::lround(prob(y, x) * 255.0f));
    }
  }
  write_raw(path, m);
}

void write_weight_map_f32(const fs::path& path, const WeightMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string());
  put_u32(out, static_cast<std::uint32_t>(map.height()));
  put_u32(out, static_cast<std::uint32_t>(map.width()));
  for (float v : map.values()) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    put_u32(out, bits);
  }
  if (!out) throw FormatError("write failed for " + path.string());
}

Grid<float> read_weight_map_f32(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  const auto h = get_u32(in);
  const auto w = get_u32(in);
  if (!in) throw FormatError(path.string() + ": truncated header");
  Grid<float> g(static_cast<int>(h), static_cast<int>(w), 0.0f);
  for (auto& v : g.values()) {
    const std::uint32_t bits = get_u32(in);
    std::memcpy(&v, &bits, sizeof v);
  }
  if (!in) throw FormatError(path.string() + ": truncated data");
  return g;
}

}  // namespace glassseg
