#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lpcoreset/linalg.hpp"
#include "lpcoreset/structured.hpp"

namespace lpcoreset {

// Text formats: comma-separated reals, one matrix row or one value per line.
// Blank lines and lines starting with '#' are ignored. Malformed content raises
// InvalidInput naming the file and line.

DenseMatrix read_matrix_csv(const std::string& path);
DenseVector read_vector(const std::string& path);

/// Sparse entries as "row,col,value" triplets (0-based). Returns per-row lists
/// for `rows` rows; the sparsity is the largest per-row count.
std::vector<std::vector<SparseEntry>> read_sparse_triplets(const std::string& path, std::size_t rows,
                                                           std::size_t cols);

void write_vector(std::ostream& out, const DenseVector& x,
                  const std::vector<std::pair<std::string, std::string>>& header = {});
void write_matrix_csv(std::ostream& out, const DenseMatrix& a);

}  // namespace lpcoreset
