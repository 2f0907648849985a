#pragma once

// Data fidelity terms G(u) and their proximal maps with per-pixel steps.
//
//   inpaint    G(u) = sum over known pixels of the indicator {u_i = u0_i}
//   force_box  G(u) = sum_i u_i w_i + indicator [0, 1],  w = lambda (1/2 - u0)
//   l2         G(u) = lambda/2 |u - f|^2
//   l1         G(u) = lambda |u - f|_1

#include <span>
#include <string>
#include <string_view>

#include "rtv/grid.hpp"

namespace rtv {

enum class DataKind { inpaint, force_box, l2, l1 };

struct DataTerm {
  DataKind kind = DataKind::inpaint;
  Image reference;      // u0 or f
  PixelMask free_mask;  // inpaint only: true on the inpainting domain
  double weight = 0.0;  // lambda

  static DataTerm inpaint(Image u0, PixelMask free_mask);
  static DataTerm force_box(Image u0, double lambda);
  static DataTerm l2(Image f, double lambda);
  static DataTerm l1(Image f, double lambda);

  int n1() const { return reference.n1; }
  int n2() const { return reference.n2; }

  /// Linear weight w_i of the force-field term.
  double force(std::size_t i) const { return weight * (0.5 - reference.values[i]); }

  /// Proximal map of tau G_i at a single pixel.
  double prox_pixel(std::size_t i, double v, double tau) const {
    const double f = reference.values[i];
    switch (kind) {
      case DataKind::inpaint:
        return free_mask.values[i] ? v : f;
      case DataKind::force_box: {
        const double x = v - tau * force(i);
        return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
      }
      case DataKind::l2:
        return (v + tau * weight * f) / (1.0 + tau * weight);
      case DataKind::l1: {
        const double d = v - f, t = tau * weight;
        return d > t ? v - t : (d < -t ? v + t : f);
      }
    }
    return v;
  }
};

std::string to_string(DataKind kind);

/// Per-pixel proximal map; throws ShapeError on size mismatch.
Image prox(const DataTerm& term, const Image& v, std::span<const double> tau);

/// G(u); +inf when u violates a hard constraint (by more than 1e-12).
double data_value(const DataTerm& term, const Image& u);

/// Starting image: u0 off the inpainting domain and 0.5 on it for inpaint,
/// the reference image clamped to [0, 1] for force_box, f otherwise.
Image initial_guess(const DataTerm& term);

}  // namespace rtv
