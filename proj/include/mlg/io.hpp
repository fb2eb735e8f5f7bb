#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mlg/types.hpp"

namespace mlg {

// CSV layout is sample-major: one row per sample, so the file is the
// transpose of the in-memory D x N matrix. Values are written with
// shortest-round-trip formatting and read back exactly.
FeatureMatrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);

// Binary layout: magic "MLGM", u32-LE row count D, u32-LE column count N,
// then D*N f64-LE values in column-major order. Bit-exact round trip.
FeatureMatrix read_matrix_binary(const std::filesystem::path& path);
void write_matrix_binary(const Matrix& m, const std::filesystem::path& path);

// Dispatches on the "MLGM" magic so either format can be passed anywhere.
FeatureMatrix read_matrix_auto(const std::filesystem::path& path);

// One nonnegative integer per line; labels are remapped to 0..k-1 in
// first-occurrence order.
std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(const std::vector<int>& labels, const std::filesystem::path& path);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace mlg
