#ifndef OPNORM_MATRIX_IO_HPP_
#define OPNORM_MATRIX_IO_HPP_

// Matrix Market ("matrix array|coordinate real|integer general|symmetric")
// and tab-separated text. Values are written with 17 significant digits so a
// write/read cycle reproduces every double exactly.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>

#include "opnorm/core.hpp"

namespace opnorm {

enum class MatrixFormat { kMatrixMarket, kTsv };

// ".mtx"/".mm" -> Matrix Market, everything else -> TSV.
MatrixFormat FormatFromPath(const std::string& path);

inline constexpr std::size_t kNoDimensionCap =
    std::numeric_limits<std::size_t>::max();

// Throws FormatError (with line number) on malformed input and SizeError when
// either dimension exceeds max_dim.
DenseMatrix ReadMatrix(std::istream& in, MatrixFormat format,
                       std::size_t max_dim = kNoDimensionCap);
DenseMatrix ReadMatrixFile(const std::string& path,
                           std::size_t max_dim = kNoDimensionCap);

void WriteMatrixMarket(std::ostream& out, const DenseMatrix& a,
                       bool coordinate = false);
void WriteTsv(std::ostream& out, const DenseMatrix& a);
void WriteMatrixFile(const std::string& path, const DenseMatrix& a);

}  // namespace opnorm

#endif  // OPNORM_MATRIX_IO_HPP_
