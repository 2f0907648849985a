#include "rtv/data_terms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rtv/parallel.hpp"

namespace rtv {

namespace {

void check_weight(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("data term weight must be >= 0");
}

}  // namespace

DataTerm DataTerm::inpaint(Image u0, PixelMask free_mask) {
  if (free_mask.n1 != u0.n1 || free_mask.n2 != u0.n2) throw ShapeError("inpainting mask does not match the image");
  DataTerm t;
  t.kind = DataKind::inpaint;
  t.reference = std::move(u0);
  t.free_mask = std::move(free_mask);
  return t;
}

DataTerm DataTerm::force_box(Image u0, double lambda) {
  check_weight(lambda);
  DataTerm t;
  t.kind = DataKind::force_box;
  t.reference = std::move(u0);
  t.weight = lambda;
  return t;
}

DataTerm DataTerm::l2(Image f, double lambda) {
  check_weight(lambda);
  DataTerm t;
  t.kind = DataKind::l2;
  t.reference = std::move(f);
  t.weight = lambda;
  return t;
}

DataTerm DataTerm::l1(Image f, double lambda) {
  check_weight(lambda);
  DataTerm t;
  t.kind = DataKind::l1;
  t.reference = std::move(f);
  t.weight = lambda;
  return t;
}

std::string to_string(DataKind kind) {
  switch (kind) {
    case DataKind::inpaint: return "inpaint";
    case DataKind::force_box: return "force_box";
    case DataKind::l2: return "l2";
    case DataKind::l1: return "l1";
  }
  return "?";
}

Image prox(const DataTerm& term, const Image& v, std::span<const double> tau) {
  if (v.n1 != term.n1() || v.n2 != term.n2() || tau.size() != v.size())
    throw ShapeError("prox: image / step size does not match the data term");
  Image out(v.n1, v.n2);
  const std::ptrdiff_t n = std::ptrdiff_t(v.size());
  RTV_OMP(parallel for schedule(static))
  for (std::ptrdiff_t i = 0; i < n; ++i) out.values[i] = term.prox_pixel(std::size_t(i), v.values[i], tau[i]);
  return out;
}

double data_value(const DataTerm& term, const Image& u) {
  if (u.n1 != term.n1() || u.n2 != term.n2()) throw ShapeError("data_value: image does not match the data term");
  constexpr double kTol = 1e-12;
  const double inf = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u.values[i], f = term.reference.values[i];
    switch (term.kind) {
      case DataKind::inpaint:
        if (!term.free_mask.values[i] && std::abs(x - f) > kTol) return inf;
        break;
      case DataKind::force_box:
        if (x < -kTol || x > 1.0 + kTol) return inf;
        sum += x * term.force(i);
        break;
      case DataKind::l2: sum += 0.5 * term.weight * (x - f) * (x - f); break;
      case DataKind::l1: sum += term.weight * std::abs(x - f); break;
    }
  }
  return sum;
}

Image initial_guess(const DataTerm& term) {
  Image u = term.reference;
  switch (term.kind) {
    case DataKind::inpaint:
      for (std::size_t i = 0; i < u.size(); ++i)
        if (term.free_mask.values[i]) u.values[i] = 0.5;
      break;
    case DataKind::force_box:
      for (double& x : u.values) x = std::clamp(x, 0.0, 1.0);
      break;
    case DataKind::l2:
    case DataKind::l1:
      break;
  }
  return u;
}

}  // namespace rtv
