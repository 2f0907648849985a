#include "rtv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rtv {

GridSpec GridSpec::make(int n1, int n2, int ntheta, double dx) {
  if (n1 < 2 || n2 < 2 || ntheta < 2) {
    std::ostringstream msg;
    msg << "grid needs n1, n2, ntheta >= 2 (got " << n1 << "x" << n2 << "x" << ntheta << ")";
    throw std::invalid_argument(msg.str());
  }
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::invalid_argument("grid spacing dx must be positive");
  return GridSpec{n1, n2, ntheta, dx, 2.0 * std::numbers::pi / ntheta};
}

std::size_t PixelMask::count() const {
  return std::size_t(std::count_if(values.begin(), values.end(), [](std::uint8_t v) { return v != 0; }));
}

namespace {

[[noreturn]] void shape_fail(const char* what, const std::string& detail) {
  throw ShapeError(std::string(what) + ": " + detail);
}

void check_grid(const GridSpec& have, const GridSpec& want, const char* what) {
  if (have.n1 != want.n1 || have.n2 != want.n2 || have.ntheta != want.ntheta)
    shape_fail(what, "field grid does not match solver grid");
}

}  // namespace

void check_shape(const Image& u, const GridSpec& g, const char* what) {
  if (u.n1 != g.n1 || u.n2 != g.n2 || u.values.size() != g.pixel_count())
    shape_fail(what, "image extents do not match grid");
}

void check_shape(const PixelMask& m, const GridSpec& g, const char* what) {
  if (m.n1 != g.n1 || m.n2 != g.n2 || m.values.size() != g.pixel_count())
    shape_fail(what, "mask extents do not match grid");
}

void check_shape(const FluxField& f, const GridSpec& g, const char* what) {
  check_grid(f.grid, g, what);
  if (f.s1.size() != g.s1_count() || f.s2.size() != g.s2_count() || f.st.size() != g.st_count())
    shape_fail(what, "flux field facet arrays have wrong size");
}

void check_shape(const VolumeField& f, const GridSpec& g, const char* what) {
  check_grid(f.grid, g, what);
  if (f.values.size() != g.volume_count()) shape_fail(what, "volume field has wrong size");
}

void check_shape(const AveragedField& f, const GridSpec& g, const char* what) {
  check_grid(f.grid, g, what);
  if (f.values.size() != g.volume_count()) shape_fail(what, "averaged field has wrong size");
}

void check_shape(const EdgeField& f, const GridSpec& g, const char* what) {
  if (f.n1 != g.n1 || f.n2 != g.n2 || f.e1.size() != g.e1_count() || f.e2.size() != g.e2_count())
    shape_fail(what, "edge field extents do not match grid");
}

double inner(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("inner: size mismatch");
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * b[n];
  return s;
}

double inner(const Image& a, const Image& b) { return inner(a.values, b.values); }

double inner(const FluxField& a, const FluxField& b) {
  return inner(a.s1, b.s1) + inner(a.s2, b.s2) + inner(a.st, b.st);
}

double inner(const VolumeField& a, const VolumeField& b) { return inner(a.values, b.values); }

double inner(const AveragedField& a, const AveragedField& b) {
  if (a.values.size() != b.values.size()) throw ShapeError("inner: size mismatch");
  double s = 0.0;
  for (std::size_t n = 0; n < a.values.size(); ++n)
    for (int c = 0; c < 3; ++c) s += a.values[n][c] * b.values[n][c];
  return s;
}

double inner(const EdgeField& a, const EdgeField& b) { return inner(a.e1, b.e1) + inner(a.e2, b.e2); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace rtv
