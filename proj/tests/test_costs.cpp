#include <optional>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mftrack/costs.hpp"

using namespace mft;

namespace {

ColorHistogram make_hist(std::vector<double> per_channel) {
  ColorHistogram h(static_cast<int>(per_channel.size()));
  for (auto& channel : h.counts) channel = per_channel;
  return h;
}

ReidEmbedding unit_embedding(std::vector<double> values) {
  ReidEmbedding e;
  e.values = std::move(values);
  return e.unit();
}

}  // namespace

TEST_CASE("mean_box_distance averages corner differences") {
  const BoundingBox a(0, 0, 10, 10);
  const BoundingBox b(2, 4, 12, 18);
  CHECK(mean_box_distance(a, b) == 4.0);
  CHECK(mean_box_distance(b, a) == 4.0);
  CHECK(mean_box_distance(a, a) == 0.0);
}

TEST_CASE("spatial_cost scales and saturates") {
  const BoundingBox a(0, 0, 10, 10);

  CHECK(spatial_cost(a, a, 16.0) == 0.0);
  CHECK(spatial_cost(a, BoundingBox(2, 4, 12, 18), 16.0) == 0.25);
  // Mean distance 16 saturates at exactly the horizon, 100 far beyond it.
  CHECK(spatial_cost(a, a.translated(16, 16), 16.0) == 1.0);
  CHECK(spatial_cost(a, a.translated(100, 100), 16.0) == 1.0);
  CHECK(spatial_cost(BoundingBox(0, 0, 60, 60), BoundingBox(6, 6, 66, 66), 40.0) ==
        doctest::Approx(0.15).epsilon(1e-12));
  CHECK_THROWS_AS(spatial_cost(a, a, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(spatial_cost(a, a, -1.0), std::invalid_argument);
}

TEST_CASE("extract_histogram counts pixels per channel") {
  Image img(4, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) img.set_rgb(x, y, 10, 130, 255);
  }

  SUBCASE("full image, 256 bins") {
    const ColorHistogram h = extract_histogram(img, BoundingBox(0, 0, 4, 4), 256);
    CHECK(h.counts[0][10] == 16.0);
    CHECK(h.counts[1][130] == 16.0);
    CHECK(h.counts[2][255] == 16.0);
    CHECK(h.channel_total(0) == 16.0);
  }
  SUBCASE("two bins split at 128") {
    const ColorHistogram h = extract_histogram(img, BoundingBox(0, 0, 4, 4), 2);
    CHECK(h.counts[0][0] == 16.0);
    CHECK(h.counts[1][1] == 16.0);
    CHECK(h.counts[2][1] == 16.0);
  }
  SUBCASE("box clipped to the image") {
    const ColorHistogram h = extract_histogram(img, BoundingBox(-5, -5, 2, 2), 256);
    CHECK(h.channel_total(0) == 4.0);
  }
  SUBCASE("box outside the image") {
    CHECK_THROWS_WITH_AS(extract_histogram(img, BoundingBox(10, 10, 20, 20), 256),
                         doctest::Contains("empty region"), std::invalid_argument);
  }
}

TEST_CASE("color_cost Bhattacharyya") {
  SUBCASE("identical histograms cost nothing") {
    CHECK(color_cost(make_hist({1, 3}), make_hist({1, 3})) == 0.0);
  }
  SUBCASE("frozen two-bin example") {
    CHECK(color_cost(make_hist({3, 1}), make_hist({1, 3})) ==
          doctest::Approx(0.36602540378443865).epsilon(1e-12));
  }
  SUBCASE("disjoint support costs one") {
    CHECK(color_cost(make_hist({4, 0}), make_hist({0, 4})) == 1.0);
  }
  SUBCASE("symmetric") {
    const ColorHistogram a = make_hist({5, 2, 0, 1});
    const ColorHistogram b = make_hist({1, 1, 4, 2});
    CHECK(color_cost(a, b) == color_cost(b, a));
  }
  SUBCASE("bin mismatch") {
    CHECK_THROWS_AS(color_cost(make_hist({1, 3}), make_hist({1, 1, 2})), std::invalid_argument);
  }
  SUBCASE("empty histogram") {
    CHECK_THROWS_WITH_AS(color_cost(make_hist({0, 0}), make_hist({1, 3})),
                         doctest::Contains("empty histogram"), std::invalid_argument);
  }
}

TEST_CASE("label_cost") {
  const ClassLabel car{"car"};
  const ClassLabel bus{"bus"};
  const ClassLabel none;

  CHECK(label_cost(car, 0.6, car, 0.8, 0.5) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(label_cost(car, 1.0, car, 1.0, 0.5) == 0.0);
  CHECK(label_cost(car, 0.9, bus, 0.9, 0.5) == 1.0);
  CHECK(label_cost(none, 0.0, car, 0.9, 0.5) == 0.5);
  CHECK(label_cost(car, 0.9, none, 0.0, 0.25) == 0.25);
  CHECK(label_cost(none, 0.0, none, 0.0, 0.5) == 0.5);
  // Symmetric in (label, confidence) pairs.
  CHECK(label_cost(car, 0.6, car, 0.8, 0.5) == label_cost(car, 0.8, car, 0.6, 0.5));
}

TEST_CASE("reid_cost corrected mode") {
  const ReidEmbedding ex = unit_embedding({1, 0});
  const ReidEmbedding ey = unit_embedding({0, 1});
  const ReidEmbedding neg = unit_embedding({-1, 0});

  CHECK(reid_cost(ex, ex, ReidMode::corrected) == 0.0);
  CHECK(reid_cost(ex, ey, ReidMode::corrected) ==
        doctest::Approx(0.7071067811865476).epsilon(1e-12));
  // Opposite unit vectors sit at the distance ceiling.
  CHECK(reid_cost(ex, neg, ReidMode::corrected) == 1.0);
  CHECK(reid_cost(ex, ey, ReidMode::corrected) == reid_cost(ey, ex, ReidMode::corrected));

  ReidEmbedding raw;
  raw.values = {1, 0};
  CHECK_THROWS_WITH_AS(reid_cost(raw, ex, ReidMode::corrected),
                       doctest::Contains("unit-normalized"), std::invalid_argument);
}

TEST_CASE("reid_cost verbatim mode") {
  const ReidEmbedding ex = unit_embedding({1, 0});
  const ReidEmbedding ey = unit_embedding({0, 1});
  ReidEmbedding a, b;
  a.values = {0.75};
  b.values = {1.0};

  CHECK(reid_cost(ex, ex, ReidMode::verbatim) == 1.0);
  CHECK(reid_cost(a, b, ReidMode::verbatim) == 0.75);
  // Distance beyond 1 clamps to zero instead of going negative.
  CHECK(reid_cost(ex, ey, ReidMode::verbatim) == 0.0);

  ReidEmbedding longer;
  longer.values = {1, 0, 0};
  CHECK_THROWS_AS(reid_cost(ex, longer, ReidMode::verbatim), std::invalid_argument);
}

TEST_CASE("final_cost is the weighted sum") {
  CostConfig cfg;
  cfg.weight_spatial = 0.25;
  cfg.weight_color = 0.25;
  cfg.weight_label = 0.25;
  cfg.weight_reid = 0.25;
  CHECK(final_cost(0.0, 1.0, 1.0, 0.0, cfg) == 0.5);
  CHECK(final_cost(0.0, 0.0, 0.0, 0.0, cfg) == 0.0);
  CHECK(final_cost(1.0, 1.0, 1.0, 1.0, cfg) == 1.0);
}

TEST_CASE("fused_cost renormalizes over present components") {
  const CostConfig cfg;  // 0.7 / 0.1 / 0.1 / 0.1

  SUBCASE("all components present matches final_cost") {
    CHECK(fused_cost(0.2, 0.4, 0.6, 0.8, cfg) ==
          doctest::Approx(final_cost(0.2, 0.4, 0.6, 0.8, cfg)).epsilon(1e-12));
  }
  SUBCASE("missing color drops its weight") {
    const double cs = 0.15000000000000002;
    const double cl = 0.30000000000000004;
    CHECK(fused_cost(cs, std::nullopt, cl, 0.5, cfg) ==
          doctest::Approx(0.20555555555555557).epsilon(1e-12));
  }
  SUBCASE("equal components fuse to themselves") {
    CHECK(fused_cost(0.4, std::nullopt, 0.4, std::nullopt, cfg) ==
          doctest::Approx(0.4).epsilon(1e-12));
    CHECK(fused_cost(0.4, 0.4, 0.4, 0.4, cfg) == doctest::Approx(0.4).epsilon(1e-12));
  }
  SUBCASE("no usable weight") {
    CostConfig zero;
    zero.weight_spatial = 0.0;
    zero.weight_label = 0.0;
    zero.weight_color = 0.5;
    zero.weight_reid = 0.5;
    CHECK_THROWS_AS(fused_cost(0.5, std::nullopt, 0.5, std::nullopt, zero),
                    std::invalid_argument);
  }
}

TEST_CASE("CostConfig::validate") {
  CHECK_NOTHROW(CostConfig{}.validate());

  CostConfig cfg;
  SUBCASE("negative weight") {
    cfg.weight_color = -0.1;
    cfg.weight_spatial = 0.9;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("weight_color"),
                         std::invalid_argument);
  }
  SUBCASE("weights not summing to one") {
    cfg.weight_spatial = 0.5;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("sum to 1"), std::invalid_argument);
  }
  SUBCASE("bad horizon") {
    cfg.max_box_distance = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("bad null label cost") {
    cfg.null_label_cost = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  SUBCASE("bad bins") {
    cfg.histogram_bins = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.histogram_bins = 257;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
}
