#pragma once

#include <filesystem>
#include <iosfwd>

#include "opshift/core/types.hpp"

namespace opshift {

// Matrix text format shared by every file the tools read or write:
//
//   hermitian <n>            or    dense <rows> <cols>
//   re im re im ...                (row-major, one row per line on output)
//
// Values are written with 17 significant digits so that a write/read cycle
// reproduces every double exactly.

enum class MatrixKind { hermitian, dense };

struct MatrixRecord {
    MatrixKind kind = MatrixKind::dense;
    ComplexMatrix entries;
};

void write_matrix(std::ostream& out, const ComplexMatrix& m, MatrixKind kind);
MatrixRecord read_matrix(std::istream& in);

void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m, MatrixKind kind);
MatrixRecord load_matrix(const std::filesystem::path& path);

}  // namespace opshift
