// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhdkin/types.hpp"

namespace mhdkin {

struct CooEntry {
  index_t row, col;
  double val;
};

// Compressed sparse row matrix. Column indices are strictly increasing within
// each row and duplicates are merged at construction.
struct CsrMatrix {
  index_t rows = 0, cols = 0;
  std::vector<index_t> row_ptr;  // size rows + 1
  std::vector<index_t> col_idx;
  std::vector<double> vals;

  std::size_t nnz() const { return vals.size(); }

  double coeff(index_t r, index_t c) const {
    for (index_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      if (col_idx[k] == c) return vals[k];
    return 0.0;
  }
};

inline CsrMatrix csr_from_coo(index_t rows, index_t cols, std::vector<CooEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const CooEntry& a, const CooEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  m.col_idx.reserve(entries.size());
  m.vals.reserve(entries.size());
  std::size_t i = 0;
  for (index_t r = 0; r < rows; ++r) {
    while (i < entries.size() && entries[i].row == r) {
      const index_t c = entries[i].col;
      double v = 0.0;
      while (i < entries.size() && entries[i].row == r && entries[i].col == c) v += entries[i++].val;
      m.col_idx.push_back(c);
      m.vals.push_back(v);
    }
    m.row_ptr[r + 1] = static_cast<index_t>(m.col_idx.size());
  }
  if (i != entries.size()) throw std::invalid_argument("csr_from_coo: entry row out of range");
  return m;
}

inline void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  if (static_cast<index_t>(x.size()) != a.cols || static_cast<index_t>(y.size()) != a.rows)
    throw std::invalid_argument("spmv: dimension mismatch");
  for (index_t r = 0; r < a.rows; ++r) {
    double s = 0.0;
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.vals[k] * x[a.col_idx[k]];
    y[r] = s;
  }
}

inline void spmv_add(const CsrMatrix& a, std::span<const double> x, std::span<double> y,
                     double alpha = 1.0) {
  if (static_cast<index_t>(x.size()) != a.cols || static_cast<index_t>(y.size()) != a.rows)
    throw std::invalid_argument("spmv_add: dimension mismatch");
  for (index_t r = 0; r < a.rows; ++r) {
    double s = 0.0;
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.vals[k] * x[a.col_idx[k]];
    y[r] += alpha * s;
  }
}

inline std::vector<double> spmv(const CsrMatrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.rows, 0.0);
  spmv(a, std::span<const double>(x), std::span<double>(y));
  return y;
}

inline CsrMatrix transpose(const CsrMatrix& a) {
  CsrMatrix t;
  t.rows = a.cols;
  t.cols = a.rows;
  t.row_ptr.assign(t.rows + 1, 0);
  for (index_t c : a.col_idx) ++t.row_ptr[c + 1];
  for (index_t r = 0; r < t.rows; ++r) t.row_ptr[r + 1] += t.row_ptr[r];
  t.col_idx.resize(a.nnz());
  t.vals.resize(a.nnz());
  std::vector<index_t> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (index_t r = 0; r < a.rows; ++r)
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      const index_t pos = next[a.col_idx[k]]++;
      t.col_idx[pos] = r;
      t.vals[pos] = a.vals[k];
    }
  return t;
}

inline std::vector<double> extract_diagonal(const CsrMatrix& a) {
  std::vector<double> d(a.rows, 0.0);
  for (index_t r = 0; r < a.rows && r < a.cols; ++r) d[r] = a.coeff(r, r);
  return d;
}

// Matrix Market I/O (coordinate real general for matrices, array for
// vectors), for cross-checking assembled systems with external tools.

inline void write_matrix_market(const CsrMatrix& a, std::ostream& os) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows << " " << a.cols << " " << a.nnz() << "\n";
  os << std::setprecision(17);
  for (index_t r = 0; r < a.rows; ++r)
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
      os << r + 1 << " " << a.col_idx[k] + 1 << " " << a.vals[k] << "\n";
}

inline void write_matrix_market(std::span<const double> v, std::ostream& os) {
  os << "%%MatrixMarket matrix array real general\n";
  os << v.size() << " 1\n";
  os << std::setprecision(17);
  for (double x : v) os << x << "\n";
}

inline void write_matrix_market_file(const CsrMatrix& a, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_matrix_market_file: cannot open " + path);
  write_matrix_market(a, os);
}

inline void write_matrix_market_file(std::span<const double> v, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_matrix_market_file: cannot open " + path);
  write_matrix_market(v, os);
}

namespace detail {
inline std::string mm_next_data_line(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '%') return line;
  }
  throw std::runtime_error("matrix market: unexpected end of file");
}
}  // namespace detail

inline CsrMatrix read_matrix_market(std::istream& is) {
  std::string header;
  std::getline(is, header);
  if (header.find("coordinate") == std::string::npos)
    throw std::runtime_error("read_matrix_market: expected coordinate format");
  std::istringstream dims(detail::mm_next_data_line(is));
  index_t rows, cols;
  std::size_t nnz;
  dims >> rows >> cols >> nnz;
  std::vector<CooEntry> entries;
  entries.reserve(nnz);
  for (std::size_t i = 0; i < nnz; ++i) {
    std::istringstream ln(detail::mm_next_data_line(is));
    index_t r, c;
    double v;
    ln >> r >> c >> v;
    entries.push_back({r - 1, c - 1, v});
  }
  return csr_from_coo(rows, cols, entries);
}

inline std::vector<double> read_matrix_market_vector(std::istream& is) {
  std::string header;
  std::getline(is, header);
  if (header.find("array") == std::string::npos)
    throw std::runtime_error("read_matrix_market_vector: expected array format");
  std::istringstream dims(detail::mm_next_data_line(is));
  std::size_t n, one;
  dims >> n >> one;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::istringstream ln(detail::mm_next_data_line(is));
    ln >> v[i];
  }
  return v;
}

}  // namespace mhdkin
