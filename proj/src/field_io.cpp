#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rtv/io.hpp"

namespace rtv {
namespace {

constexpr const char* kHeader = "i,j,k,theta,sigma1,sigma2,sigma_theta";

template <class T>
T parse_field(const std::string& s, const std::string& path, long line) {
  T v{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size())
    throw IoError(path + ":" + std::to_string(line) + ": cannot parse '" + s + "'");
  return v;
}

}  // namespace

std::string field_csv(const AveragedField& sh, const GridSpec& g) {
  check_shape(sh, g, "field_csv");
  std::string out = std::string(kHeader) + "\n";
  char buf[256];
  for (int k = 0; k < g.ntheta; ++k)
    for (int j = 0; j < g.n2 - 1; ++j)
      for (int i = 0; i < g.n1 - 1; ++i) {
        const Vec3& p = sh.values[g.volume(i, j, k)];
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g,%.17g\n", i, j, k, g.theta(k), p[0], p[1], p[2]);
        out += buf;
      }
  return out;
}

void export_field(const AveragedField& sh, const GridSpec& g, const std::string& path) {
  const std::string text = field_csv(sh, g);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

AveragedField import_field(const std::string& path, const GridSpec& g) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw IoError("'" + path + "' lacks the field CSV header");
  AveragedField sh(g);
  std::vector<char> seen(g.volume_count(), 0);
  std::size_t records = 0;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    if (cols.size() != 7) throw IoError(path + ":" + std::to_string(lineno) + ": expected 7 columns");
    const int i = parse_field<int>(cols[0], path, lineno);
    const int j = parse_field<int>(cols[1], path, lineno);
    const int k = parse_field<int>(cols[2], path, lineno);
    if (i < 0 || i >= g.n1 - 1 || j < 0 || j >= g.n2 - 1 || k < 0 || k >= g.ntheta)
      throw IoError(path + ":" + std::to_string(lineno) + ": volume index out of range");
    const std::size_t v = g.volume(i, j, k);
    if (seen[v]) throw IoError(path + ":" + std::to_string(lineno) + ": duplicate volume");
    seen[v] = 1;
    for (int c = 0; c < 3; ++c) sh.values[v][c] = parse_field<double>(cols[4 + c], path, lineno);
    ++records;
  }
  if (records != g.volume_count())
    throw IoError("'" + path + "' has " + std::to_string(records) + " records, expected " +
                  std::to_string(g.volume_count()));
  return sh;
}

}  // namespace rtv
