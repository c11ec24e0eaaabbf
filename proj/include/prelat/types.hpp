#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace prelat {

using Vec  = Eigen::VectorXd;
using Mat  = Eigen::MatrixXd;
using VecI = Eigen::VectorXi;
using MatI = Eigen::MatrixXi;

// Multi-index of a node of the reference lattice eps * Z^n, n <= 3.
// Unused trailing components stay zero so equality and hashing are uniform.
struct NodeKey {
  std::array<std::int64_t, 3> c{{0, 0, 0}};
  int dim = 0;

  NodeKey() = default;
  explicit NodeKey(const VecI& index) : dim(static_cast<int>(index.size())) {
    for (int i = 0; i < dim; ++i) c[static_cast<std::size_t>(i)] = index[i];
  }
  NodeKey(std::int64_t x, std::int64_t y) : c{{x, y, 0}}, dim(2) {}
  NodeKey(std::int64_t x, std::int64_t y, std::int64_t z) : c{{x, y, z}}, dim(3) {}

  bool operator==(const NodeKey& o) const { return dim == o.dim && c == o.c; }
  bool operator<(const NodeKey& o) const { return c < o.c; }

  VecI index() const {
    VecI m(dim);
    for (int i = 0; i < dim; ++i) m[i] = static_cast<int>(c[static_cast<std::size_t>(i)]);
    return m;
  }
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(k.dim + 1);
    for (std::int64_t v : k.c) {
      std::uint64_t z = h + static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ull;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
      h = z ^ (z >> 31);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace prelat
