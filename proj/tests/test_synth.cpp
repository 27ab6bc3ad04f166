#include <cstdlib>
#include <map>
#include <stdexcept>

#include "doctest.h"
#include "mftrack/synth.hpp"
#include "test_util.hpp"

using namespace mft;
using mft_test::TempDir;
using mft_test::write_text;

namespace {

SyntheticScene basic_scene() {
  SyntheticScene s;
  s.width = 96;
  s.height = 64;
  s.frame_count = 10;
  s.seed = 5;

  ObjectScript obj;
  obj.entry = 2;
  obj.exit = 8;
  obj.initial = BoundingBox(4, 10, 24, 30);
  obj.vx = 3.0;
  obj.vy = 1.0;
  obj.red = 250;
  obj.green = 20;
  obj.blue = 20;
  obj.label = "car";
  s.objects.push_back(obj);
  return s;
}

}  // namespace

TEST_CASE("ObjectScript::box_at moves linearly from entry") {
  ObjectScript o;
  o.entry = 3;
  o.exit = 9;
  o.initial = BoundingBox(0, 0, 10, 10);
  o.vx = 2.0;
  o.vy = -1.0;
  CHECK(o.box_at(3) == BoundingBox(0, 0, 10, 10));
  CHECK(o.box_at(5) == BoundingBox(4, -2, 14, 8));
}

TEST_CASE("SyntheticScene::validate") {
  SyntheticScene s = basic_scene();
  CHECK_NOTHROW(s.validate());

  SUBCASE("bad dimensions") {
    s.width = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  }
  SUBCASE("noise range") {
    s.noise_amplitude = 128;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  }
  SUBCASE("entry after exit") {
    s.objects[0].entry = 9;
    s.objects[0].exit = 2;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  }
  SUBCASE("exit beyond the last frame") {
    s.objects[0].exit = 10;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  }
  SUBCASE("an object escaping the frame names the frame") {
    s.objects[0].vx = 20.0;  // leaves on the right well before exit
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("leaves the frame"),
                         std::invalid_argument);
  }
}

TEST_CASE("generate_scene emits ground truth matching the script") {
  const SyntheticScene s = basic_scene();
  const SceneOutput out = generate_scene(s);

  CHECK(out.frames.size() == 10);
  REQUIRE(out.gt.size() == 7);  // frames 2..8
  for (const auto& r : out.gt) {
    CHECK(r.id == 1);
    CHECK(r.label == ClassLabel{"car"});
    CHECK(r.confidence == 1.0);
    CHECK(r.box == s.objects[0].box_at(r.frame));
  }
  CHECK(out.gt.front().frame == 2);
  CHECK(out.gt.back().frame == 8);
}

TEST_CASE("generate_scene paints objects over the background") {
  SyntheticScene s = basic_scene();
  s.noise_amplitude = 0;
  const SceneOutput out = generate_scene(s);

  // Inside the box at frame 2 the object color shows; outside, the
  // checkerboard background stays in its narrow gray band.
  const Image& f2 = out.frames[2];
  CHECK(f2.at(10, 15, 0) == 250);
  CHECK(f2.at(10, 15, 1) == 20);
  CHECK(f2.at(60, 50, 0) < 200);

  // Before entry the object is absent.
  CHECK(out.frames[0].at(10, 15, 0) < 200);
}

TEST_CASE("generate_scene draws later objects on top") {
  SyntheticScene s;
  s.width = 64;
  s.height = 64;
  s.frame_count = 2;
  ObjectScript a;
  a.entry = 0;
  a.exit = 1;
  a.initial = BoundingBox(10, 10, 30, 30);
  a.red = 255;
  a.green = 0;
  a.blue = 0;
  ObjectScript b = a;
  b.initial = BoundingBox(20, 10, 40, 30);
  b.red = 0;
  b.blue = 255;
  s.objects = {a, b};

  const SceneOutput out = generate_scene(s);
  CHECK(out.frames[0].at(25, 15, 2) == 255);  // overlap shows object 2
  CHECK(out.frames[0].at(12, 15, 0) == 255);  // object 1 remains elsewhere
}

TEST_CASE("generate_scene is deterministic and noise is bounded") {
  SyntheticScene s = basic_scene();
  s.noise_amplitude = 5;

  const SceneOutput a = generate_scene(s);
  const SceneOutput b = generate_scene(s);
  REQUIRE(a.frames.size() == b.frames.size());
  for (size_t f = 0; f < a.frames.size(); ++f) CHECK(a.frames[f].data == b.frames[f].data);

  s.noise_amplitude = 0;
  const SceneOutput clean = generate_scene(s);
  int max_diff = 0;
  for (size_t f = 0; f < a.frames.size(); ++f) {
    for (size_t i = 0; i < a.frames[f].data.size(); ++i) {
      max_diff = std::max(max_diff, std::abs(static_cast<int>(a.frames[f].data[i]) -
                                             static_cast<int>(clean.frames[f].data[i])));
    }
  }
  CHECK(max_diff <= 5);
  CHECK(max_diff > 0);
}

TEST_CASE("load_scene") {
  TempDir dir;
  const std::string path = dir.file("scene.txt");

  SUBCASE("parses a full script") {
    write_text(path,
               "# demo scene\n"
               "width = 128\n"
               "height = 96\n"
               "frames = 20\n"
               "noise = 3\n"
               "seed = 77\n"
               "object = entry=0 exit=19 box=4,4,24,24 vel=2,0 color=200,30,30 label=car\n"
               "object = entry=5 exit=15 box=40,40,80,80\n");
    const SyntheticScene s = load_scene(path);
    CHECK(s.width == 128);
    CHECK(s.height == 96);
    CHECK(s.frame_count == 20);
    CHECK(s.noise_amplitude == 3);
    CHECK(s.seed == 77);
    REQUIRE(s.objects.size() == 2);
    CHECK(s.objects[0].label == ClassLabel{"car"});
    CHECK(s.objects[0].vx == 2.0);
    CHECK(s.objects[0].red == 200);
    CHECK_FALSE(s.objects[1].label.has_value());
    CHECK(s.objects[1].vx == 0.0);
    CHECK(s.objects[1].red == 200);  // default color
  }
  SUBCASE("unknown scene key names the line") {
    write_text(path, "width = 64\nheight = 64\nframes = 2\nbogus = 1\n");
    CHECK_THROWS_WITH_AS(load_scene(path), doctest::Contains(":4:"), std::runtime_error);
  }
  SUBCASE("object missing required fields") {
    write_text(path, "width = 64\nheight = 64\nframes = 2\nobject = entry=0 exit=1\n");
    CHECK_THROWS_WITH_AS(load_scene(path), doctest::Contains("box="), std::runtime_error);
  }
  SUBCASE("malformed box") {
    write_text(path,
               "width = 64\nheight = 64\nframes = 2\nobject = entry=0 exit=1 box=1,2,3\n");
    CHECK_THROWS_AS(load_scene(path), std::runtime_error);
  }
  SUBCASE("validation failures carry the path") {
    write_text(path, "width = 64\nheight = 64\nframes = 2\n"
                     "object = entry=0 exit=1 box=50,50,70,70\n");
    CHECK_THROWS_WITH_AS(load_scene(path), doctest::Contains("leaves the frame"),
                         std::runtime_error);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_scene(dir.file("nope.txt")), std::runtime_error); }
}
