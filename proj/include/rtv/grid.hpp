#pragma once

// Staggered 2D/3D grid: pixels of the image domain and volumes of the
// roto-translation space Omega x S^1, plus the fields living on them.
//
// Index conventions (all 0-based, i along x1, j along x2, k along theta):
//   pixel  (i, j)     : 0 <= i < n1,   0 <= j < n2,   centre ((i+1/2)dx, (j+1/2)dx)
//   volume (i, j, k)  : 0 <= i < n1-1, 0 <= j < n2-1, centre ((i+1)dx, (j+1)dx, k dtheta)
//   s1 facet (i, j, k): 0 <= i < n1,   0 <= j < n2-1, at x1 = (i+1/2)dx
//   s2 facet (i, j, k): 0 <= i < n1-1, 0 <= j < n2,   at x2 = (j+1/2)dx
//   st facet (i, j, k): 0 <= i < n1-1, 0 <= j < n2-1, at theta = (k-1/2)dtheta
//   e1 edge  (i, j)   : 0 <= i < n1,   0 <= j < n2-1  (between pixels (i,j) and (i,j+1))
//   e2 edge  (i, j)   : 0 <= i < n1-1, 0 <= j < n2    (between pixels (i,j) and (i+1,j))
// Volume i has s1 facets i (lower) and i+1 (upper); likewise in j for s2.
// Volume k has st facets k (lower) and k+1 mod ntheta (upper).
//
// 3D arrays are stored with theta outermost: ((k * nj) + j) * ni + i.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rtv {

using Vec3 = std::array<double, 3>;

/// Raised when a field's extents disagree with the grid it is used with.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  int n1 = 0;
  int n2 = 0;
  int ntheta = 0;
  double dx = 1.0;
  double dtheta = 0.0;

  /// Validated constructor; dtheta is always 2*pi/ntheta.
  static GridSpec make(int n1, int n2, int ntheta, double dx = 1.0);

  std::size_t pixel_count() const { return std::size_t(n1) * n2; }
  std::size_t volume_count() const { return std::size_t(n1 - 1) * (n2 - 1) * ntheta; }
  std::size_t s1_count() const { return std::size_t(n1) * (n2 - 1) * ntheta; }
  std::size_t s2_count() const { return std::size_t(n1 - 1) * n2 * ntheta; }
  std::size_t st_count() const { return volume_count(); }
  std::size_t e1_count() const { return std::size_t(n1) * (n2 - 1); }
  std::size_t e2_count() const { return std::size_t(n1 - 1) * n2; }

  std::size_t pixel(int i, int j) const { return std::size_t(j) * n1 + i; }
  std::size_t volume(int i, int j, int k) const {
    return (std::size_t(k) * (n2 - 1) + j) * (n1 - 1) + i;
  }
  std::size_t s1(int i, int j, int k) const { return (std::size_t(k) * (n2 - 1) + j) * n1 + i; }
  std::size_t s2(int i, int j, int k) const { return (std::size_t(k) * n2 + j) * (n1 - 1) + i; }
  std::size_t st(int i, int j, int k) const { return volume(i, j, k); }
  std::size_t e1(int i, int j) const { return std::size_t(j) * n1 + i; }
  std::size_t e2(int i, int j) const { return std::size_t(j) * (n1 - 1) + i; }

  /// Centre angle of orientation slab k.
  double theta(int k) const { return k * dtheta; }
  int next_k(int k) const { return k + 1 == ntheta ? 0 : k + 1; }
  int prev_k(int k) const { return k == 0 ? ntheta - 1 : k - 1; }

  bool operator==(const GridSpec&) const = default;
};

/// Scalar image over the pixel index set, values addressed as (i, j).
struct Image {
  int n1 = 0;
  int n2 = 0;
  std::vector<double> values;

  Image() = default;
  Image(int n1_, int n2_, double fill = 0.0)
      : n1(n1_), n2(n2_), values(std::size_t(n1_) * n2_, fill) {}

  double& operator()(int i, int j) { return values[std::size_t(j) * n1 + i]; }
  double operator()(int i, int j) const { return values[std::size_t(j) * n1 + i]; }
  std::size_t size() const { return values.size(); }
};

/// Boolean mask over pixels (nonzero = set).
struct PixelMask {
  int n1 = 0;
  int n2 = 0;
  std::vector<std::uint8_t> values;

  PixelMask() = default;
  PixelMask(int n1_, int n2_, bool fill = false)
      : n1(n1_), n2(n2_), values(std::size_t(n1_) * n2_, fill ? 1 : 0) {}

  bool operator()(int i, int j) const { return values[std::size_t(j) * n1 + i] != 0; }
  void set(int i, int j, bool v) { values[std::size_t(j) * n1 + i] = v ? 1 : 0; }
  std::size_t count() const;
};

/// Facet fluxes (s1, s2, st) of a staggered field on the volume grid.
struct FluxField {
  GridSpec grid;
  std::vector<double> s1;
  std::vector<double> s2;
  std::vector<double> st;

  FluxField() = default;
  explicit FluxField(const GridSpec& g)
      : grid(g), s1(g.s1_count(), 0.0), s2(g.s2_count(), 0.0), st(g.st_count(), 0.0) {}
};

/// One scalar per volume (e.g. the divergence, or its multiplier phi).
struct VolumeField {
  GridSpec grid;
  std::vector<double> values;

  VolumeField() = default;
  explicit VolumeField(const GridSpec& g) : grid(g), values(g.volume_count(), 0.0) {}
};

/// One 3-vector per volume: the face-averaged field, or its dual xi.
struct AveragedField {
  GridSpec grid;
  std::vector<Vec3> values;

  AveragedField() = default;
  explicit AveragedField(const GridSpec& g) : grid(g), values(g.volume_count(), Vec3{0, 0, 0}) {}
};

/// Values on the pixel edges (range of the projection and gradient operators).
struct EdgeField {
  int n1 = 0;
  int n2 = 0;
  std::vector<double> e1;
  std::vector<double> e2;

  EdgeField() = default;
  EdgeField(int n1_, int n2_)
      : n1(n1_), n2(n2_), e1(std::size_t(n1_) * (n2_ - 1), 0.0), e2(std::size_t(n1_ - 1) * n2_, 0.0) {}
  explicit EdgeField(const GridSpec& g) : EdgeField(g.n1, g.n2) {}
};

// Shape checks; each throws ShapeError with a message naming `what`.
void check_shape(const Image& u, const GridSpec& g, const char* what);
void check_shape(const PixelMask& m, const GridSpec& g, const char* what);
void check_shape(const FluxField& f, const GridSpec& g, const char* what);
void check_shape(const VolumeField& f, const GridSpec& g, const char* what);
void check_shape(const AveragedField& f, const GridSpec& g, const char* what);
void check_shape(const EdgeField& f, const GridSpec& g, const char* what);

// Plain Euclidean inner products over the respective index sets.
double inner(std::span<const double> a, std::span<const double> b);
double inner(const Image& a, const Image& b);
double inner(const FluxField& a, const FluxField& b);
double inner(const VolumeField& a, const VolumeField& b);
double inner(const AveragedField& a, const AveragedField& b);
double inner(const EdgeField& a, const EdgeField& b);

double norm_inf(std::span<const double> a);

}  // namespace rtv
