#include "mlg/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <string_view>
#include <system_error>

namespace mlg {

namespace {

constexpr std::array<char, 4> kMagic = {'M', 'L', 'G', 'M'};

std::string loc(const std::filesystem::path& path) { return "'" + path.string() + "'"; }

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_double_token(std::string_view token, const std::filesystem::path& path, int line,
                          int column) {
    const std::string_view t = trim(token);
    double value = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || t.empty()) {
        throw ParseError("non-numeric token '" + std::string(t) + "' in " + loc(path) + " at line " +
                         std::to_string(line) + ", column " + std::to_string(column));
    }
    if (!std::isfinite(value)) {
        throw NonFiniteError("non-finite value in " + loc(path) + " at line " + std::to_string(line) +
                             ", column " + std::to_string(column));
    }
    return value;
}

void put_u32_le(std::ostream& out, std::uint32_t v) {
    const std::array<char, 4> b = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                   static_cast<char>((v >> 16) & 0xff),
                                   static_cast<char>((v >> 24) & 0xff)};
    out.write(b.data(), b.size());
}

std::uint32_t get_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f64_le(std::ostream& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(b.data(), b.size());
}

double get_f64_le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
    return std::bit_cast<double>(bits);
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

FeatureMatrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + loc(path));

    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        std::vector<double> row;
        std::size_t start = 0;
        int column = 1;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string_view token(line.data() + start,
                                         (comma == std::string::npos ? line.size() : comma) - start);
            row.push_back(parse_double_token(token, path, line_no, column));
            if (comma == std::string::npos) break;
            start = comma + 1;
            ++column;
        }
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw FormatError("ragged row in " + loc(path) + " at line " + std::to_string(line_no) +
                              ": got " + std::to_string(row.size()) + " values, expected " +
                              std::to_string(width));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError("empty input: " + loc(path));

    // On-disk rows are samples; in memory columns are samples.
    Matrix m(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = rows[i][j];
        }
    }
    return FeatureMatrix{std::move(m), 0};
}

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
    if (!m.allFinite()) throw NonFiniteError("refusing to write non-finite matrix to " + loc(path));
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("cannot open " + loc(path) + " for writing");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i > 0) out.put(',');
            out << format_double(m(i, j));
        }
        out.put('\n');
    }
    if (!out) throw FormatError("write failed for " + loc(path));
}

FeatureMatrix read_matrix_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + loc(path));
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 12) throw FormatError("truncated header in " + loc(path));
    if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
        throw FormatError("bad magic in " + loc(path) + " (expected MLGM)");
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint32_t rows = get_u32_le(p + 4);
    const std::uint32_t cols = get_u32_le(p + 8);
    const std::uint64_t expected = 12 + 8ull * rows * cols;
    if (bytes.size() != expected) {
        throw FormatError("truncated payload in " + loc(path) + ": " + std::to_string(bytes.size()) +
                          " bytes, expected " + std::to_string(expected));
    }
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    const unsigned char* q = p + 12;
    for (std::uint32_t j = 0; j < cols; ++j) {
        for (std::uint32_t i = 0; i < rows; ++i) {
            const double v = get_f64_le(q);
            if (!std::isfinite(v)) {
                throw NonFiniteError("non-finite value in " + loc(path) + " at row " +
                                     std::to_string(i) + ", column " + std::to_string(j));
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            q += 8;
        }
    }
    return FeatureMatrix{std::move(m), 0};
}

void write_matrix_binary(const Matrix& m, const std::filesystem::path& path) {
    if (!m.allFinite()) throw NonFiniteError("refusing to write non-finite matrix to " + loc(path));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + loc(path) + " for writing");
    out.write(kMagic.data(), kMagic.size());
    put_u32_le(out, static_cast<std::uint32_t>(m.rows()));
    put_u32_le(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) put_f64_le(out, m(i, j));
    }
    if (!out) throw FormatError("write failed for " + loc(path));
}

FeatureMatrix read_matrix_auto(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + loc(path));
    std::array<char, 4> head = {0, 0, 0, 0};
    in.read(head.data(), head.size());
    in.close();
    if (std::memcmp(head.data(), kMagic.data(), kMagic.size()) == 0) return read_matrix_binary(path);
    return read_matrix_csv(path);
}

std::vector<int> read_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + loc(path));
    std::vector<int> raw;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        const std::string_view t = trim(line);
        if (t.empty()) {
            throw ParseError("blank line in " + loc(path) + " at line " + std::to_string(line_no));
        }
        long value = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
        if (ec != std::errc{} || ptr != t.data() + t.size()) {
            throw ParseError("non-integer label '" + std::string(t) + "' in " + loc(path) +
                             " at line " + std::to_string(line_no));
        }
        if (value < 0) {
            throw ParseError("negative label " + std::to_string(value) + " in " + loc(path) +
                             " at line " + std::to_string(line_no));
        }
        raw.push_back(static_cast<int>(value));
    }
    if (raw.empty()) throw FormatError("empty input: " + loc(path));

    // Remap to 0..k-1 in first-occurrence order.
    std::map<int, int> remap;
    std::vector<int> labels;
    labels.reserve(raw.size());
    for (int v : raw) {
        auto [it, inserted] = remap.try_emplace(v, static_cast<int>(remap.size()));
        labels.push_back(it->second);
    }
    return labels;
}

void write_labels(const std::vector<int>& labels, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("cannot open " + loc(path) + " for writing");
    for (int v : labels) out << v << '\n';
    if (!out) throw FormatError("write failed for " + loc(path));
}

}  // namespace mlg
