#pragma once

#include <filesystem>
#include <string>

#include "pcae/dataset.hpp"
#include "pcae/matrix.hpp"

namespace pcae {

enum class CsvOrientation {
    RowsAreObservations,    // transposed into column-per-observation form
    ColumnsAreObservations, // file cells map directly onto the matrix
};

// IDX3 ubyte image file (big-endian magic 0x00000803). Pixels are scaled to
// [0, 1] by dividing by 255; image_shape is set from the header.
Dataset read_idx_images(const std::filesystem::path& path);

Dataset read_csv_matrix(const std::filesystem::path& path, CsvOrientation orientation);

// Numeric CSV with 17 significant digits (lossless for doubles re-read with
// ColumnsAreObservations).
void write_csv_matrix(const Matrix& m, const std::filesystem::path& path);

// PCAE container: magic "PCAE", u32 version (=1), u64 rows, u64 cols, all
// little-endian, followed by row-major little-endian float64 payload.
// Round-trips bit-exactly.
void write_matrix(const Matrix& m, const std::filesystem::path& path);
Matrix read_matrix(const std::filesystem::path& path);

// Tile the m columns of `vectors` as images into a binary PGM (P5, maxval
// 255) grid. Each column is affine-mapped independently so min -> 0 and
// max -> 255; a constant column renders as mid-gray (128).
void write_pgm_grid(const Matrix& vectors, ImageShape shape, std::size_t grid_cols,
                    const std::filesystem::path& path);

} // namespace pcae
