#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "glassseg/data.hpp"
#include "glassseg/image.hpp"
#include "glassseg/mask.hpp"

namespace glassseg {

// framed_window: a glass pane behind a thick, high-contrast frame (strong
// external boundary). frameless_cup: an elliptical vessel whose only cue is
// refraction and a specular rim just inside its contour (strong internal
// boundary). mixed_scene: one of each plus a framed non-glass distractor
// whose interior is untouched background.
enum class FixtureKind { framed_window, frameless_cup, mixed_scene };

std::string to_string(FixtureKind kind);
FixtureKind parse_fixture_kind(const std::string& text);

struct Fixture {
  RgbImage image;
  BinaryMask mask;        // glass interior, contour included
  BinaryMask frame;       // frame pixels around glass panes
  BinaryMask distractor;  // interior of the non-glass framed distractor
  std::string category;   // "stuff" (windows), "things" (cups) or "mixed"
};

/// Deterministic in (kind, size, seed). size must be at least 64.
Fixture synth_fixture(FixtureKind kind, int size, std::uint64_t seed);

struct SynthSpec {
  FixtureKind kind = FixtureKind::mixed_scene;
  int count = 20;
  int size = 128;
  std::uint64_t seed = 1;
  // For the two single-object kinds: probability that an item is rendered
  // as the other single-object kind instead.
  double minority_fraction = 0.0;
};

/// Seed used for item `index` of a synthetic set.
std::uint64_t item_seed(std::uint64_t seed, std::size_t index);

std::vector<Fixture> synth_fixtures(const SynthSpec& spec);
std::vector<RawSample> synth_dataset(const SynthSpec& spec);

/// Writes `out/images/NNNN.png`, `out/masks/NNNN.png` and
/// `out/categories.tsv`.
void write_synth_dataset(const std::filesystem::path& out,
                         const SynthSpec& spec);

}  // namespace glassseg
