#include "hurwitz/icosphere.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace hurwitz {

SphereMesh icosphere(int level) {
  if (level < 0 || level > 9) throw std::invalid_argument("icosphere: level out of range [0, 9]");
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  SphereMesh m;
  const double raw[12][3] = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
                             {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
                             {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (const auto& r : raw) m.vertices.push_back(Eigen::Vector3d(r[0], r[1], r[2]).normalized());
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      const int id = static_cast<int>(m.vertices.size());
      // Sum in a fixed order so that symmetric inputs give symmetric outputs.
      const Eigen::Vector3d s = m.vertices[static_cast<std::size_t>(key.first)] +
                                m.vertices[static_cast<std::size_t>(key.second)];
      m.vertices.push_back(s.normalized());
      mid.emplace(key, id);
      return id;
    };
    std::vector<Triangle> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      const int a = midpoint(f[0], f[1]);
      const int b = midpoint(f[1], f[2]);
      const int c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    m.faces = std::move(next);
  }
  return m;
}

double mean_edge_length(const SphereMesh& mesh) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      sum += (mesh.vertices[static_cast<std::size_t>(f[static_cast<std::size_t>(k)])] -
              mesh.vertices[static_cast<std::size_t>(f[static_cast<std::size_t>((k + 1) % 3)])])
                 .norm();
      ++count;
    }
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

PolarDisk polar_disk(int outer_count, double radius) {
  if (outer_count < 8 || outer_count % 4 != 0)
    throw std::invalid_argument("polar_disk: outer count must be a multiple of 4 and >= 8");
  if (!(radius > 0.0)) throw std::invalid_argument("polar_disk: radius must be positive");
  const int rings = std::max(1, static_cast<int>(std::lround(outer_count / (2.0 * std::numbers::pi))));
  std::vector<int> counts(static_cast<std::size_t>(rings));
  for (int k = 1; k <= rings; ++k) {
    int c = k == rings ? outer_count
                       : 4 * std::max(2, static_cast<int>(std::lround(outer_count * k / (4.0 * rings))));
    if (k > 1) c = std::max(c, counts[static_cast<std::size_t>(k - 2)]);
    counts[static_cast<std::size_t>(k - 1)] = c;
  }

  PolarDisk d;
  d.points.emplace_back(0.0, 0.0);
  std::vector<std::vector<int>> ring_ids;
  for (int k = 1; k <= rings; ++k) {
    const double r = radius * k / rings;
    const int c = counts[static_cast<std::size_t>(k - 1)];
    std::vector<int> ids;
    for (int l = 0; l < c; ++l) {
      ids.push_back(static_cast<int>(d.points.size()));
      // Exact values at the quarter turns keep the x -> i x symmetry exact.
      const int q = 4 * l;
      std::complex<double> e;
      if (q % c == 0) {
        static const std::complex<double> quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        e = quarter[(q / c) % 4];
      } else {
        e = std::polar(1.0, 2.0 * std::numbers::pi * l / c);
      }
      d.points.push_back(r * e);
    }
    ring_ids.push_back(std::move(ids));
  }
  // Center fan.
  const auto& first = ring_ids.front();
  for (std::size_t l = 0; l < first.size(); ++l) d.faces.push_back({0, first[l], first[(l + 1) % first.size()]});
  // Ring-to-ring strips with exact rational angle comparison.
  for (std::size_t k = 0; k + 1 < ring_ids.size(); ++k) {
    const auto& in = ring_ids[k];
    const auto& out = ring_ids[k + 1];
    const long n1 = static_cast<long>(in.size()), n2 = static_cast<long>(out.size());
    auto tris = zip_loops(in, out, [&](int i, int j) { return static_cast<long>(i) * n2 <= static_cast<long>(j) * n1; });
    d.faces.insert(d.faces.end(), tris.begin(), tris.end());
  }
  d.outer = ring_ids.back();
  return d;
}

}  // namespace hurwitz
