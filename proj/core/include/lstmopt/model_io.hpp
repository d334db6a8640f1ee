#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "lstmopt/bilstm.hpp"

namespace lstmopt {

inline constexpr std::uint32_t kModelFormatVersion = 1;

// Binary layout, all little-endian:
//   magic "LSTMOPT\0" (8 bytes), u32 format_version, u32 layer_count,
//   u32 width, u32 input_size, f64 dropout, f64[4] mean, f64[4] std,
//   u32 tensor_count, then per tensor in BiLstmModel::tensors() order:
//   u32 name_length, name bytes, u32 rows, u32 cols, f64[rows*cols]
//   (column-major).
void write_model(std::ostream& out, const BiLstmModel& model);
BiLstmModel read_model(std::istream& in);

// Also writes "<path>.manifest" listing tensor names, shapes and FNV-1a 64
// checksums of the raw tensor bytes.
void save_model(const std::filesystem::path& path, const BiLstmModel& model);
BiLstmModel load_model(const std::filesystem::path& path);

std::string model_manifest(const BiLstmModel& model);
std::uint64_t fnv1a64(const void* data, std::size_t size) noexcept;

}  // namespace lstmopt
