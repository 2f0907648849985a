#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "rtv/io.hpp"
#include "support.hpp"

using namespace rtv;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("rtv_io_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

Image ramp(int n1, int n2) {
  Image img(n1, n2);
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) img(i, j) = double((7 * i + 13 * j) % 256) / 255.0;
  return img;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("8-bit images round-trip exactly through PGM and PNG") {
  TempDir tmp;
  const Image img = ramp(17, 9);
  for (const char* name : {"a.pgm", "a.png", "a.PNG"}) {
    CAPTURE(name);
    write_image(img, tmp.file(name));
    const Image back = read_image(tmp.file(name));
    REQUIRE(back.n1 == 17);
    REQUIRE(back.n2 == 9);
    CHECK(back.values == img.values);
  }
  // PNG signature is detected regardless of the extension.
  fs::copy_file(tmp.file("a.png"), tmp.file("disguised.pgm"));
  CHECK(read_image(tmp.file("disguised.pgm")).values == img.values);
}

TEST_CASE("writing quantizes and clamps") {
  TempDir tmp;
  Image img(3, 1);
  img.values = {-0.2, 0.5004, 1.7};
  write_image(img, tmp.file("q.pgm"));
  const Image back = read_image(tmp.file("q.pgm"));
  CHECK(back.values[0] == 0.0);
  CHECK(back.values[1] == 128.0 / 255.0);
  CHECK(back.values[2] == 1.0);
  std::mt19937_64 rng(3);
  Image r(8, 8);
  test::fill_random(r.values, rng, 0.0, 1.0);
  write_image(r, tmp.file("r.png"));
  const Image rb = read_image(tmp.file("r.png"));
  for (std::size_t p = 0; p < r.size(); ++p) CHECK(std::abs(rb.values[p] - r.values[p]) <= 0.5 / 255.0 + 1e-15);
}

TEST_CASE("ASCII PGM with comments and a non-255 maxval") {
  TempDir tmp;
  write_text(tmp.file("a.pgm"), "P2\n# comment\n3 2\n# another\n15\n0 15 5\n10 15 0\n");
  const Image img = read_image(tmp.file("a.pgm"));
  REQUIRE(img.n1 == 3);
  REQUIRE(img.n2 == 2);
  CHECK(img(0, 0) == 0.0);
  CHECK(img(1, 0) == 1.0);
  CHECK(img(2, 0) == 85.0 / 255.0);
  CHECK(img(0, 1) == 170.0 / 255.0);
}

TEST_CASE("masks: 255 is known, 0 is unknown") {
  TempDir tmp;
  PixelMask unknown(4, 3);
  unknown.set(1, 1, true);
  unknown.set(3, 0, true);
  write_inpainting_mask(unknown, tmp.file("m.pgm"));
  const Image raw = read_image(tmp.file("m.pgm"));
  CHECK(raw(1, 1) == 0.0);
  CHECK(raw(0, 0) == 1.0);
  const PixelMask back = read_inpainting_mask(tmp.file("m.pgm"));
  CHECK(back.values == unknown.values);
  const PixelMask marked = read_marker_mask(tmp.file("m.pgm"));
  CHECK(marked.count() == 12 - 2);
}

TEST_CASE("image I/O errors") {
  TempDir tmp;
  CHECK_THROWS_AS(read_image(tmp.file("missing.pgm")), IoError);
  write_text(tmp.file("bad.pgm"), "P6\n1 1\n255\nx");
  CHECK_THROWS_AS(read_image(tmp.file("bad.pgm")), IoError);
  write_text(tmp.file("short.pgm"), "P5\n4 4\n255\nab");
  CHECK_THROWS_AS(read_image(tmp.file("short.pgm")), IoError);
  write_text(tmp.file("over.pgm"), "P2\n1 1\n10\n11\n");
  CHECK_THROWS_AS(read_image(tmp.file("over.pgm")), IoError);
  CHECK_THROWS_AS(write_image(Image(), tmp.file("e.pgm")), IoError);
  CHECK_THROWS_AS(write_image(ramp(2, 2), tmp.file("no/such/dir.pgm")), IoError);
}

TEST_CASE("field export: header, record count and exact read-back") {
  TempDir tmp;
  const GridSpec g = GridSpec::make(5, 4, 6);
  AveragedField zero(g);
  export_field(zero, g, tmp.file("z.csv"));
  std::ifstream in(tmp.file("z.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "i,j,k,theta,sigma1,sigma2,sigma_theta");
  std::size_t records = 0;
  while (std::getline(in, line)) ++records;
  CHECK(records == std::size_t(4 * 3 * 6));

  std::mt19937_64 rng(11);
  AveragedField f = test::random_averaged(g, rng);
  f.values[3][1] = 1e-300;
  f.values[7][2] = -std::nextafter(1.0, 2.0);
  export_field(f, g, tmp.file("f.csv"));
  const AveragedField back = import_field(tmp.file("f.csv"), g);
  for (std::size_t v = 0; v < f.values.size(); ++v)
    for (int c = 0; c < 3; ++c) CHECK(back.values[v][c] == f.values[v][c]);
}

TEST_CASE("field import errors") {
  TempDir tmp;
  const GridSpec g = GridSpec::make(3, 3, 2);
  const GridSpec other = GridSpec::make(4, 3, 2);
  export_field(AveragedField(g), g, tmp.file("f.csv"));
  CHECK_THROWS_AS(import_field(tmp.file("f.csv"), other), IoError);
  write_text(tmp.file("h.csv"), "a,b\n");
  CHECK_THROWS_AS(import_field(tmp.file("h.csv"), g), IoError);
  write_text(tmp.file("r.csv"), "i,j,k,theta,sigma1,sigma2,sigma_theta\n9,0,0,0,0,0,0\n");
  CHECK_THROWS_AS(import_field(tmp.file("r.csv"), g), IoError);
  write_text(tmp.file("p.csv"), "i,j,k,theta,sigma1,sigma2,sigma_theta\n0,0,0,0,x,0,0\n");
  CHECK_THROWS_AS(import_field(tmp.file("p.csv"), g), IoError);
  CHECK_THROWS_AS(import_field(tmp.file("missing.csv"), g), IoError);
  CHECK_THROWS_AS(export_field(AveragedField(other), g, tmp.file("x.csv")), ShapeError);
}
