#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "rtv/io.hpp"

namespace rtv {
namespace {

struct Gray8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // row-major
};

using FilePtr = std::unique_ptr<std::FILE, int (*)(std::FILE*)>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode), &std::fclose);
  if (!f) throw IoError("cannot open '" + path + "'");
  return f;
}

bool has_png_extension(const std::string& path) {
  if (path.size() < 4) return false;
  std::string ext = path.substr(path.size() - 4);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png";
}

// PGM header tokens are separated by whitespace; '#' starts a comment that
// runs to the end of the line.
std::string pgm_token(std::istream& in, const std::string& path) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(char(c));
  }
  if (tok.empty()) throw IoError("truncated PGM header in '" + path + "'");
  return tok;
}

int pgm_int(std::istream& in, const std::string& path) {
  const std::string t = pgm_token(in, path);
  try {
    std::size_t pos = 0;
    const int v = std::stoi(t, &pos);
    if (pos != t.size() || v < 0) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw IoError("bad PGM header field '" + t + "' in '" + path + "'");
  }
}

Gray8 read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  const std::string magic = pgm_token(in, path);
  if (magic != "P5" && magic != "P2") throw IoError("'" + path + "' is not a PGM file");
  Gray8 img;
  img.width = pgm_int(in, path);
  img.height = pgm_int(in, path);
  const int maxval = pgm_int(in, path);
  if (img.width == 0 || img.height == 0 || maxval == 0 || maxval > 65535)
    throw IoError("unsupported PGM dimensions or maxval in '" + path + "'");
  const std::size_t n = std::size_t(img.width) * img.height;
  std::vector<int> raw(n);
  if (magic == "P5") {
    const int bytes = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> buf(n * bytes);
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
    if (std::size_t(in.gcount()) != buf.size()) throw IoError("truncated PGM data in '" + path + "'");
    for (std::size_t p = 0; p < n; ++p) raw[p] = bytes == 1 ? buf[p] : (buf[2 * p] << 8) | buf[2 * p + 1];
  } else {
    for (std::size_t p = 0; p < n; ++p) {
      if (!(in >> raw[p])) throw IoError("truncated PGM data in '" + path + "'");
    }
  }
  img.data.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    if (raw[p] > maxval) throw IoError("PGM sample exceeds maxval in '" + path + "'");
    img.data[p] = std::uint8_t(std::lround(255.0 * raw[p] / maxval));
  }
  return img;
}

void write_pgm(const Gray8& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()), std::streamsize(img.data.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

Gray8 read_png(const std::string& path) {
  FilePtr f = open_file(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  Gray8 img;
  std::vector<png_bytep> rows;
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    throw IoError("invalid PNG file '" + path + "'");
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  const png_byte color = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA || color == PNG_COLOR_TYPE_PALETTE)
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  png_read_update_info(png, info);
  img.width = int(png_get_image_width(png, info));
  img.height = int(png_get_image_height(png, info));
  if (png_get_rowbytes(png, info) != png_size_t(img.width)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("unsupported PNG layout in '" + path + "'");
  }
  img.data.resize(std::size_t(img.width) * img.height);
  rows.resize(img.height);
  for (int r = 0; r < img.height; ++r) rows[r] = img.data.data() + std::size_t(r) * img.width;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_png(const Gray8& img, const std::string& path) {
  FilePtr f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows(img.height);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, info ? &info : nullptr);
    throw IoError("write failed for '" + path + "'");
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, png_uint_32(img.width), png_uint_32(img.height), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < img.height; ++r)
    rows[r] = const_cast<png_bytep>(img.data.data() + std::size_t(r) * img.width);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Gray8 read_gray(const std::string& path) {
  unsigned char sig[8] = {};
  {
    FilePtr f = open_file(path, "rb");
    const std::size_t got = std::fread(sig, 1, sizeof sig, f.get());
    if (got == sizeof sig && png_sig_cmp(sig, 0, sizeof sig) == 0) return read_png(path);
  }
  return read_pgm(path);
}

void write_gray(const Gray8& img, const std::string& path) {
  if (has_png_extension(path))
    write_png(img, path);
  else
    write_pgm(img, path);
}

}  // namespace

Image read_image(const std::string& path) {
  const Gray8 g = read_gray(path);
  Image img(g.width, g.height);
  for (std::size_t p = 0; p < g.data.size(); ++p) img.values[p] = g.data[p] / 255.0;
  return img;
}

void write_image(const Image& img, const std::string& path) {
  if (img.n1 <= 0 || img.n2 <= 0) throw IoError("cannot write an empty image");
  Gray8 g{img.n1, img.n2, std::vector<std::uint8_t>(img.size())};
  for (std::size_t p = 0; p < img.size(); ++p) {
    const double v = std::isnan(img.values[p]) ? 0.0 : std::clamp(img.values[p], 0.0, 1.0);
    g.data[p] = std::uint8_t(std::lround(255.0 * v));
  }
  write_gray(g, path);
}

PixelMask read_marker_mask(const std::string& path) {
  const Gray8 g = read_gray(path);
  PixelMask m(g.width, g.height);
  for (std::size_t p = 0; p < g.data.size(); ++p) m.values[p] = g.data[p] >= 128;
  return m;
}

PixelMask read_inpainting_mask(const std::string& path) {
  PixelMask m = read_marker_mask(path);
  for (auto& v : m.values) v = !v;
  return m;
}

void write_inpainting_mask(const PixelMask& unknown, const std::string& path) {
  if (unknown.n1 <= 0 || unknown.n2 <= 0) throw IoError("cannot write an empty mask");
  Gray8 g{unknown.n1, unknown.n2, std::vector<std::uint8_t>(unknown.values.size())};
  for (std::size_t p = 0; p < g.data.size(); ++p) g.data[p] = unknown.values[p] ? 0 : 255;
  write_gray(g, path);
}

}  // namespace rtv
