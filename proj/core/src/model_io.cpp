#include "lstmopt/model_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "lstmopt/errors.hpp"

namespace lstmopt {
namespace {

static_assert(std::endian::native == std::endian::little, "model files assume a little-endian host");

constexpr std::array<char, 8> kMagic{'L', 'S', 'T', 'M', 'O', 'P', 'T', '\0'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw FormatError("model file truncated");
  }
  return value;
}

}  // namespace

std::uint64_t fnv1a64(const void* data, std::size_t size) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

void write_model(std::ostream& out, const BiLstmModel& model) {
  const auto& cfg = model.config();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kModelFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.layers));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.width));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.input_size));
  put<double>(out, cfg.dropout);
  for (double m : model.standardizer.mean) put<double>(out, m);
  for (double s : model.standardizer.stddev) put<double>(out, s);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.tensors().size()));
  for (const auto& slot : model.tensors()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(slot.name.size()));
    out.write(slot.name.data(), static_cast<std::streamsize>(slot.name.size()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(slot.rows));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(slot.cols));
    out.write(reinterpret_cast<const char*>(model.params().data() + slot.offset),
              static_cast<std::streamsize>(slot.size() * sizeof(double)));
  }
  if (!out) throw IoError("failed writing model");
}

BiLstmModel read_model(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError("not a model file (bad magic)");
  }
  const auto version = take<std::uint32_t>(in);
  if (version != kModelFormatVersion) {
    throw FormatError("unsupported model format_version " + std::to_string(version) +
                      " (expected " + std::to_string(kModelFormatVersion) + ")");
  }
  BiLstmConfig cfg;
  cfg.layers = take<std::uint32_t>(in);
  cfg.width = take<std::uint32_t>(in);
  cfg.input_size = take<std::uint32_t>(in);
  cfg.dropout = take<double>(in);
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw FormatError(std::string("model header: ") + e.what());
  }
  BiLstmModel model(cfg);
  for (double& m : model.standardizer.mean) m = take<double>(in);
  for (double& s : model.standardizer.stddev) {
    s = take<double>(in);
    if (!(s > 0)) throw FormatError("model header: non-positive feature std");
  }
  const auto count = take<std::uint32_t>(in);
  if (count != model.tensors().size()) throw FormatError("model tensor count mismatch");
  for (const auto& slot : model.tensors()) {
    const auto len = take<std::uint32_t>(in);
    if (len > 256) throw FormatError("model tensor name too long");
    std::string name(len, '\0');
    if (!in.read(name.data(), len)) throw FormatError("model file truncated");
    const auto rows = take<std::uint32_t>(in);
    const auto cols = take<std::uint32_t>(in);
    if (name != slot.name || rows != slot.rows || cols != slot.cols) {
      throw FormatError("model tensor '" + name + "' does not match expected '" + slot.name + "'");
    }
    if (!in.read(reinterpret_cast<char*>(model.params().data() + slot.offset),
                 static_cast<std::streamsize>(slot.size() * sizeof(double)))) {
      throw FormatError("model file truncated");
    }
  }
  return model;
}

std::string model_manifest(const BiLstmModel& model) {
  std::ostringstream out;
  const auto& cfg = model.config();
  out << "format_version " << kModelFormatVersion << '\n'
      << "layers " << cfg.layers << "\nwidth " << cfg.width << "\ninput_size " << cfg.input_size
      << "\ndropout " << cfg.dropout << '\n';
  for (const auto& slot : model.tensors()) {
    const double* data = model.params().data() + slot.offset;
    out << slot.name << ' ' << slot.rows << 'x' << slot.cols << " fnv1a64=" << std::hex
        << std::setw(16) << std::setfill('0') << fnv1a64(data, slot.size() * sizeof(double))
        << std::dec << std::setfill(' ') << '\n';
  }
  return out.str();
}

void save_model(const std::filesystem::path& path, const BiLstmModel& model) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_model(out, model);
  }
  std::ofstream manifest(path.string() + ".manifest");
  if (!manifest) throw IoError("cannot write manifest for " + path.string());
  manifest << model_manifest(model);
}

BiLstmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model " + path.string());
  return read_model(in);
}

}  // namespace lstmopt
