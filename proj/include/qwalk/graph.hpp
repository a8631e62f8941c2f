#ifndef QWALK_GRAPH_HPP
#define QWALK_GRAPH_HPP

// Hamiltonians (dense, immutable) and the graphs they induce: vertices are
// basis states, edges join k != j with |H_kj| above a threshold.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/error.hpp"

namespace qwalk {

using Complex = std::complex<double>;

inline constexpr double kDefaultEdgeThreshold = 1.0e-12;
inline constexpr double kHermitianTolerance = 1.0e-12;
inline constexpr std::size_t kMaxDenseSize = 2000;

class Hamiltonian {
 public:
  // Row-major s x s entries. labels are signed vertex coordinates (defaults to
  // 0..s-1); boundary lists vertex indices whose occupation is monitored by
  // the integrator.
  Hamiltonian(std::size_t size, std::vector<Complex> entries, std::vector<int> labels = {},
              std::vector<std::size_t> boundary = {})
      : size_(size), entries_(std::move(entries)), labels_(std::move(labels)), boundary_(std::move(boundary)) {
    if (size_ == 0 || size_ > kMaxDenseSize)
      throw ValidationError("hamiltonian: size must lie in [1, " + std::to_string(kMaxDenseSize) + "]");
    if (entries_.size() != size_ * size_) throw ValidationError("hamiltonian: expected size*size entries");
    if (labels_.empty()) {
      labels_.resize(size_);
      std::iota(labels_.begin(), labels_.end(), 0);
    }
    if (labels_.size() != size_) throw ValidationError("hamiltonian: one label per vertex required");
    for (std::size_t b : boundary_)
      if (b >= size_) throw ValidationError("hamiltonian: boundary vertex out of range");
    for (const Complex& z : entries_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw ValidationError("hamiltonian: non-finite entry");
    build_sparsity();
  }

  std::size_t size() const { return size_; }
  const Complex& operator()(std::size_t k, std::size_t j) const { return entries_[k * size_ + j]; }
  std::span<const Complex> entries() const { return entries_; }
  std::span<const int> labels() const { return labels_; }
  std::span<const std::size_t> boundary() const { return boundary_; }

  // Labels form a run first, first+1, ... (true for the line and the default).
  bool contiguous_labels() const {
    for (std::size_t i = 1; i < size_; ++i)
      if (labels_[i] != labels_[0] + static_cast<int>(i)) return false;
    return true;
  }

  double hermitian_defect() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < size_; ++k)
      for (std::size_t j = k; j < size_; ++j)
        worst = std::max(worst, std::abs((*this)(k, j) - std::conj((*this)(j, k))));
    return worst;
  }

  bool is_hermitian(double tol = kHermitianTolerance) const { return hermitian_defect() <= tol; }

  void require_hermitian(double tol = kHermitianTolerance) const {
    if (!is_hermitian(tol)) throw ValidationError("hamiltonian: matrix is not Hermitian");
  }

  // Max absolute row sum, an upper bound on the spectral radius.
  double row_sum_norm() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < size_; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < size_; ++j) s += std::abs((*this)(k, j));
      worst = std::max(worst, s);
    }
    return worst;
  }

  // out = H * in, skipping structural zeros.
  void apply(std::span<const Complex> in, std::span<Complex> out) const {
    for (std::size_t k = 0; k < size_; ++k) {
      Complex acc{};
      for (std::size_t p = row_start_[k]; p < row_start_[k + 1]; ++p) acc += values_[p] * in[columns_[p]];
      out[k] = acc;
    }
  }

 private:
  void build_sparsity() {
    row_start_.assign(size_ + 1, 0);
    for (std::size_t k = 0; k < size_; ++k) {
      for (std::size_t j = 0; j < size_; ++j) {
        const Complex& z = (*this)(k, j);
        if (z != Complex{}) {
          columns_.push_back(j);
          values_.push_back(z);
        }
      }
      row_start_[k + 1] = columns_.size();
    }
  }

  std::size_t size_;
  std::vector<Complex> entries_;
  std::vector<int> labels_;
  std::vector<std::size_t> boundary_;
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> columns_;
  std::vector<Complex> values_;
};

struct Edge {
  std::size_t a;  // a < b
  std::size_t b;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Graph {
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;                          // sorted by (a, b)
  std::vector<std::vector<std::size_t>> neighbors;  // N(k), ascending

  bool has_edge(std::size_t k, std::size_t j) const {
    if (k == j || k >= vertex_count || j >= vertex_count) return false;
    const auto& n = neighbors[k];
    return std::binary_search(n.begin(), n.end(), j);
  }

  bool connected() const {
    if (vertex_count == 0) return true;
    std::vector<bool> seen(vertex_count, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w : neighbors[v])
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          stack.push_back(w);
        }
    }
    return reached == vertex_count;
  }
};

namespace graph {

inline Graph derive_graph(const Hamiltonian& h, double edge_threshold = kDefaultEdgeThreshold) {
  h.require_hermitian();
  if (!(edge_threshold >= 0.0)) throw ValidationError("derive_graph: edge threshold must be >= 0");
  Graph g;
  g.vertex_count = h.size();
  g.neighbors.resize(h.size());
  for (std::size_t k = 0; k < h.size(); ++k)
    for (std::size_t j = k + 1; j < h.size(); ++j)
      if (std::abs(h(k, j)) > edge_threshold) {
        g.edges.push_back({k, j});
        g.neighbors[k].push_back(j);
        g.neighbors[j].push_back(k);
      }
  for (auto& n : g.neighbors) std::sort(n.begin(), n.end());
  return g;
}

/// Nearest-neighbour hopping -1/2 on [-L, L]; vertex x is stored at index x + L.
inline Hamiltonian line_hamiltonian(int half_width) {
  if (half_width < 1) throw ValidationError("line_hamiltonian: half_width must be >= 1");
  const std::size_t s = 2 * static_cast<std::size_t>(half_width) + 1;
  if (s > kMaxDenseSize) throw ValidationError("line_hamiltonian: system too large for dense storage");
  std::vector<Complex> entries(s * s);
  for (std::size_t i = 0; i + 1 < s; ++i) {
    entries[i * s + i + 1] = -0.5;
    entries[(i + 1) * s + i] = -0.5;
  }
  std::vector<int> labels(s);
  std::iota(labels.begin(), labels.end(), -half_width);
  return Hamiltonian(s, std::move(entries), std::move(labels), {0, s - 1});
}

inline Hamiltonian two_site_hamiltonian() {
  return Hamiltonian(2, {0.0, -0.5, -0.5, 0.0});
}

}  // namespace graph
}  // namespace qwalk

#endif  // QWALK_GRAPH_HPP
