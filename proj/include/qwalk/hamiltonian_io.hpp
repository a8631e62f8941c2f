#ifndef QWALK_HAMILTONIAN_IO_HPP
#define QWALK_HAMILTONIAN_IO_HPP

// Plain-text Hamiltonian format:
//
//   # comment lines and blank lines are ignored
//   size 3
//   labels -1 0 1          (optional; signed vertex coordinates)
//   0 1 -0.5 0             (row col re im), one nonzero entry per line
//   1 0 -0.5 0
//
// Entries not listed are zero. Both (k,j) and (j,k) must be given; the reader
// does not symmetrize, derive_graph rejects non-Hermitian input.

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/graph.hpp"

namespace qwalk::graph {

inline Hamiltonian read_hamiltonian(std::istream& in) {
  std::size_t size = 0;
  std::vector<int> labels;
  struct Entry {
    std::size_t row, col;
    double re, im;
  };
  std::vector<Entry> entries;
  std::string line;
  int line_no = 0;
  const auto fail = [&](const std::string& why) {
    throw ValidationError("hamiltonian file line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "size") {
      long long s = 0;
      if (size != 0 || !(ls >> s) || s <= 0) fail("bad size declaration");
      size = static_cast<std::size_t>(s);
    } else if (head == "labels") {
      int v = 0;
      while (ls >> v) labels.push_back(v);
    } else {
      if (size == 0) fail("entry before size declaration");
      long long row = 0, col = 0;
      double re = 0.0, im = 0.0;
      std::istringstream es(line);
      if (!(es >> row >> col >> re >> im)) fail("expected 'row col re im'");
      std::string extra;
      if (es >> extra) fail("trailing tokens");
      if (row < 0 || col < 0 || static_cast<std::size_t>(row) >= size || static_cast<std::size_t>(col) >= size)
        fail("index out of range");
      entries.push_back({static_cast<std::size_t>(row), static_cast<std::size_t>(col), re, im});
    }
  }
  if (size == 0) throw ValidationError("hamiltonian file: missing size declaration");
  std::vector<Complex> dense(size * size);
  for (const auto& e : entries) dense[e.row * size + e.col] = Complex(e.re, e.im);
  return Hamiltonian(size, std::move(dense), std::move(labels));
}

inline Hamiltonian read_hamiltonian_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open hamiltonian file: " + path);
  return read_hamiltonian(in);
}

inline void write_hamiltonian(std::ostream& out, const Hamiltonian& h) {
  out << "size " << h.size() << '\n' << "labels";
  for (int l : h.labels()) out << ' ' << l;
  out << '\n';
  char buf[128];
  for (std::size_t k = 0; k < h.size(); ++k)
    for (std::size_t j = 0; j < h.size(); ++j)
      if (const Complex z = h(k, j); z != Complex{}) {
        std::snprintf(buf, sizeof buf, "%zu %zu %.17g %.17g\n", k, j, z.real(), z.imag());
        out << buf;
      }
}

}  // namespace qwalk::graph

#endif  // QWALK_HAMILTONIAN_IO_HPP
