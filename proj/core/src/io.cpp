#include "pcae/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "pcae/errors.hpp"

namespace pcae {

namespace {

constexpr std::uint32_t kIdxImageMagic = 0x00000803;
constexpr char kMatrixMagic[4] = {'P', 'C', 'A', 'E'};
constexpr std::uint32_t kMatrixVersion = 1;

std::uint32_t read_u32_be(std::istream& in, const char* what) {
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4))
        throw IoError(std::string("truncated file while reading ") + what);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
    std::array<unsigned char, 4> b{};
    for (int i = 0; i < 4; ++i)
        b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::uint32_t read_u32_le(std::istream& in, const char* what) {
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4))
        throw IoError(std::string("truncated file while reading ") + what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= std::uint32_t(b[i]) << (8 * i);
    return v;
}

void write_u64_le(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t read_u64_le(std::istream& in, const char* what) {
    std::array<unsigned char, 8> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 8))
        throw IoError(std::string("truncated file while reading ") + what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= std::uint64_t(b[i]) << (8 * i);
    return v;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open file for reading: " + path.string());
    return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open file for writing: " + path.string());
    return out;
}

} // namespace

Dataset read_idx_images(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    const std::uint32_t magic = read_u32_be(in, "IDX magic");
    if (magic != kIdxImageMagic) {
        std::ostringstream msg;
        msg << "not an image IDX file: magic 0x" << std::hex << magic << " (expected 0x803)";
        throw IoError(msg.str());
    }
    const std::uint64_t count = read_u32_be(in, "IDX image count");
    const std::uint64_t height = read_u32_be(in, "IDX image height");
    const std::uint64_t width = read_u32_be(in, "IDX image width");
    if (count == 0 || height == 0 || width == 0)
        throw IoError("IDX file declares a zero dimension");
    if (height * width > std::numeric_limits<std::uint32_t>::max() ||
        count * height * width / (height * width) != count)
        throw IoError("IDX dimensions overflow");

    const std::uint64_t n = height * width;
    std::vector<unsigned char> pixels(n);
    Matrix obs(n, count);
    for (std::uint64_t j = 0; j < count; ++j) {
        if (!in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(n)))
            throw IoError("truncated IDX payload at image " + std::to_string(j));
        for (std::uint64_t i = 0; i < n; ++i)
            obs(i, j) = static_cast<double>(pixels[i]) / 255.0;
    }

    Dataset d;
    d.observations = std::move(obs);
    d.source_tag = path.filename().string();
    d.image_shape = ImageShape{static_cast<std::size_t>(height), static_cast<std::size_t>(width)};
    return d;
}

Dataset read_csv_matrix(const std::filesystem::path& path, CsvOrientation orientation) {
    std::ifstream in = open_for_read(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<double> row;
        std::size_t start = 0;
        std::size_t col = 0;
        while (start <= line.size()) {
            std::size_t end = line.find(',', start);
            if (end == std::string::npos)
                end = line.size();
            ++col;
            const char* first = line.data() + start;
            const char* last = line.data() + end;
            while (first < last && (*first == ' ' || *first == '\t'))
                ++first;
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(first, last, value);
            while (ptr < last && (*ptr == ' ' || *ptr == '\t'))
                ++ptr;
            if (ec != std::errc() || ptr != last)
                throw IoError("non-numeric CSV cell at row " + std::to_string(lineno) +
                              ", column " + std::to_string(col) + " in " + path.string());
            row.push_back(value);
            if (end == line.size())
                break;
            start = end + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("ragged CSV row " + std::to_string(lineno) + " in " + path.string() +
                          ": " + std::to_string(row.size()) + " cells, expected " +
                          std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw IoError("empty CSV file: " + path.string());

    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(i, j) = rows[i][j];

    Dataset d;
    d.observations =
        orientation == CsvOrientation::RowsAreObservations ? transpose(m) : std::move(m);
    d.source_tag = path.filename().string();
    return d;
}

void write_csv_matrix(const Matrix& m, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    out.precision(17);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j)
                out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
    if (!out)
        throw IoError("write failed: " + path.string());
}

void write_matrix(const Matrix& m, const std::filesystem::path& path) {
    if (!m.all_finite())
        throw NumericError("write_matrix: refusing to persist non-finite entries");
    std::ofstream out = open_for_write(path);
    out.write(kMatrixMagic, 4);
    write_u32_le(out, kMatrixVersion);
    write_u64_le(out, m.rows());
    write_u64_le(out, m.cols());
    static_assert(std::endian::native == std::endian::little,
                  "payload writer assumes a little-endian host");
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
    if (!out)
        throw IoError("write failed: " + path.string());
}

Matrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    char magic[4];
    if (!in.read(magic, 4))
        throw IoError("truncated matrix file: " + path.string());
    if (std::memcmp(magic, kMatrixMagic, 4) != 0)
        throw IoError("bad matrix magic in " + path.string());
    const std::uint32_t version = read_u32_le(in, "matrix version");
    if (version != kMatrixVersion)
        throw IoError("unsupported matrix version " + std::to_string(version) + " in " +
                      path.string());
    const std::uint64_t rows = read_u64_le(in, "matrix rows");
    const std::uint64_t cols = read_u64_le(in, "matrix cols");
    if (rows != 0 && cols != 0 && rows > std::numeric_limits<std::uint64_t>::max() / cols)
        throw IoError("matrix dimensions overflow in " + path.string());

    Matrix m(rows, cols);
    if (!in.read(reinterpret_cast<char*>(m.data()),
                 static_cast<std::streamsize>(m.size() * sizeof(double))))
        throw IoError("truncated matrix payload in " + path.string());
    if (!m.all_finite())
        throw IoError("matrix file contains non-finite entries: " + path.string());
    return m;
}

void write_pgm_grid(const Matrix& vectors, ImageShape shape, std::size_t grid_cols,
                    const std::filesystem::path& path) {
    const std::size_t n = vectors.rows();
    const std::size_t m = vectors.cols();
    if (shape.height * shape.width != n)
        throw DimensionError("write_pgm_grid: image shape does not match vector length");
    if (grid_cols == 0)
        throw ConfigError("write_pgm_grid: grid_cols must be >= 1");

    const std::size_t grid_rows = (m + grid_cols - 1) / grid_cols;
    const std::size_t out_w = grid_cols * shape.width;
    const std::size_t out_h = grid_rows * shape.height;
    std::vector<unsigned char> image(out_w * out_h, 0);

    for (std::size_t col = 0; col < m; ++col) {
        double lo = vectors(0, col), hi = vectors(0, col);
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, vectors(i, col));
            hi = std::max(hi, vectors(i, col));
        }
        const double range = hi - lo;
        const std::size_t tile_r = (col / grid_cols) * shape.height;
        const std::size_t tile_c = (col % grid_cols) * shape.width;
        for (std::size_t i = 0; i < n; ++i) {
            unsigned char px;
            if (range == 0.0) {
                px = 128;
            } else {
                const double v = (vectors(i, col) - lo) / range * 255.0;
                px = static_cast<unsigned char>(std::lround(v));
            }
            const std::size_t r = tile_r + i / shape.width;
            const std::size_t c = tile_c + i % shape.width;
            image[r * out_w + c] = px;
        }
    }

    std::ofstream out = open_for_write(path);
    out << "P5\n" << out_w << ' ' << out_h << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.data()),
              static_cast<std::streamsize>(image.size()));
    if (!out)
        throw IoError("write failed: " + path.string());
}

} // namespace pcae
