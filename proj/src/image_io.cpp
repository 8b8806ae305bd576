#include "depthbench/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace depthbench::io {
namespace {

constexpr std::uint64_t kMaxPixels = static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max());

void check_dims(std::uint64_t width, std::uint64_t height, std::size_t offset) {
  if (width == 0 || height == 0) throw ParseError("zero raster dimension", offset);
  if (width > kMaxPixels || height > kMaxPixels || width * height > kMaxPixels) {
    throw StructuralError("raster of " + std::to_string(width) + "x" + std::to_string(height) +
                          " exceeds 2^31 pixels");
  }
}

float load_f32(const std::uint8_t* p, bool little_endian) {
  std::uint32_t bits = 0;
  if (little_endian) {
    bits = std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
           std::uint32_t{p[3]} << 24;
  } else {
    bits = std::uint32_t{p[3]} | std::uint32_t{p[2]} << 8 | std::uint32_t{p[1]} << 16 |
           std::uint32_t{p[0]} << 24;
  }
  return std::bit_cast<float>(bits);
}

void store_f32_le(std::vector<std::uint8_t>& out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
}

void store_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::uint32_t load_u32_le(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
         std::uint32_t{p[3]} << 24;
}

// Minimal tokenizer for the ASCII PFM header.
class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string token() {
    while (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) ++pos_;
    const auto start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) ++pos_;
    if (start == pos_) throw ParseError("truncated PFM header", pos_);
    return {reinterpret_cast<const char*>(bytes_.data() + start), pos_ - start};
  }

  std::uint64_t integer() {
    const auto start = skip_space();
    const auto tok = token();
    std::uint64_t v = 0;
    for (char c : tok) {
      if (c < '0' || c > '9') throw ParseError("expected integer in PFM header", start);
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
      if (v > (std::uint64_t{1} << 40)) throw ParseError("PFM dimension too large", start);
    }
    return v;
  }

  double real() {
    const auto start = skip_space();
    const auto tok = token();
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !std::isfinite(v) || v == 0.0) {
      throw ParseError("invalid PFM scale '" + tok + "'", start);
    }
    return v;
  }

  // The header ends with exactly one whitespace byte after the scale.
  std::size_t end_of_header() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ParseError("missing newline after PFM scale", pos_);
    }
    return pos_ + 1;
  }

  std::size_t position() const { return pos_; }

 private:
  std::size_t skip_space() {
    while (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) ++pos_;
    return pos_;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// --- libpng glue --------------------------------------------------------

struct MemoryReader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void png_read_mem(png_structp png, png_bytep out, png_size_t count) {
  auto* src = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (src->pos + count > src->bytes.size()) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(out, src->bytes.data() + src->pos, count);
  src->pos += count;
}

void png_write_mem(png_structp png, png_bytep data, png_size_t count) {
  auto* dst = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  dst->insert(dst->end(), data, data + count);
}

void png_flush_noop(png_structp) {}

struct PngErrorSlot {
  char message[256] = {};
};

void png_error_to_slot(png_structp png, png_const_charp msg) {
  auto* slot = static_cast<PngErrorSlot*>(png_get_error_ptr(png));
  std::snprintf(slot->message, sizeof(slot->message), "%s", msg);
  png_longjmp(png, 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

enum class PngStatus { Ok, Failed, NotGray };

// Everything with a destructor is declared before setjmp.
PngStatus decode_png_impl(std::span<const std::uint8_t> bytes, DecodedRaster& out,
                          PngErrorSlot& err, std::size_t& consumed) {
  MemoryReader reader{bytes, 0};
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_to_slot,
                                           png_warning_ignore);
  if (!png) return PngStatus::Failed;
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows;
  std::vector<std::uint8_t> pixels;
  PngStatus status = PngStatus::Ok;
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return PngStatus::Failed;
  }
  if (setjmp(png_jmpbuf(png))) {
    consumed = reader.pos;
    png_destroy_read_struct(&png, &info, nullptr);
    return PngStatus::Failed;
  }
  png_set_read_fn(png, &reader, png_read_mem);
  png_read_info(png, info);
  const auto width = png_get_image_width(png, info);
  const auto height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  if (color_type != PNG_COLOR_TYPE_GRAY) {
    status = PngStatus::NotGray;
  } else {
    if (bit_depth < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
      bit_depth = 8;
    }
    if (bit_depth == 16 && std::endian::native == std::endian::little) png_set_swap(png);
    png_read_update_info(png, info);
    const auto stride = png_get_rowbytes(png, info);
    pixels.resize(stride * height);
    rows.resize(height);
    for (png_uint_32 r = 0; r < height; ++r) rows[r] = pixels.data() + r * stride;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    out.width = static_cast<int>(width);
    out.height = static_cast<int>(height);
    out.bit_depth = bit_depth;
    out.values.resize(static_cast<std::size_t>(width) * height);
    for (png_uint_32 r = 0; r < height; ++r) {
      for (png_uint_32 c = 0; c < width; ++c) {
        double v = 0.0;
        if (bit_depth == 16) {
          std::uint16_t code;
          std::memcpy(&code, rows[r] + 2 * c, 2);
          v = code;
        } else {
          v = rows[r][c];
        }
        out.values[static_cast<std::size_t>(r) * width + c] = v;
      }
    }
  }
  consumed = reader.pos;
  png_destroy_read_struct(&png, &info, nullptr);
  return status;
}

bool encode_png16_impl(const std::vector<std::uint16_t>& codes, int width, int height,
                       std::vector<std::uint8_t>& out, PngErrorSlot& err) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_to_slot,
                                            png_warning_ignore);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * 2);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, &out, png_write_mem, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 16,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const auto code = codes[static_cast<std::size_t>(r) * width + c];
      row[2 * c] = static_cast<std::uint8_t>(code >> 8);  // PNG is big-endian
      row[2 * c + 1] = static_cast<std::uint8_t>(code & 0xff);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

std::string lower_ext(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

std::string to_string(Format f) {
  switch (f) {
    case Format::PFM: return "pfm";
    case Format::PNG16: return "png16";
    case Format::RawF32: return "raw-f32";
    case Format::MaskPNG: return "mask-png";
  }
  return "unknown";
}

std::optional<Format> format_from_extension(const std::filesystem::path& p) {
  const auto ext = lower_ext(p);
  if (ext == ".pfm") return Format::PFM;
  if (ext == ".png") return Format::PNG16;
  if (ext == ".dbf" || ext == ".f32" || ext == ".raw") return Format::RawF32;
  return std::nullopt;
}

RasterFile::RasterFile(std::filesystem::path p, double scale)
    : path(std::move(p)), format(Format::PFM), scale(scale) {
  const auto f = format_from_extension(path);
  if (!f) throw UnsupportedConfigError("cannot infer raster format of " + path.string());
  format = *f;
  if (!(scale > 0.0)) throw DomainError("raster scale must be > 0");
}

RasterFile::RasterFile(std::filesystem::path p, Format f, double scale)
    : path(std::move(p)), format(f), scale(scale) {
  if (!(scale > 0.0)) throw DomainError("raster scale must be > 0");
}

DecodedRaster decode_pfm(std::span<const std::uint8_t> bytes) {
  HeaderReader header(bytes);
  const auto magic = header.token();
  if (magic == "PF") throw StructuralError("color PFM (PF) is not a single-channel raster");
  if (magic != "Pf") throw ParseError("bad PFM magic '" + magic + "'", 0);
  const auto width = header.integer();
  const auto height = header.integer();
  check_dims(width, height, header.position());
  const double scale = header.real();
  const auto data_start = header.end_of_header();
  const bool little = scale < 0.0;
  const auto n = static_cast<std::size_t>(width * height);
  if (bytes.size() - data_start < n * 4) {
    throw ParseError("PFM payload truncated: need " + std::to_string(n * 4) + " bytes",
                     bytes.size());
  }
  DecodedRaster out;
  out.width = static_cast<int>(width);
  out.height = static_cast<int>(height);
  out.values.resize(n);
  // Rows are stored bottom-to-top.
  for (std::size_t file_row = 0; file_row < height; ++file_row) {
    const auto dst_row = height - 1 - file_row;
    const auto* src = bytes.data() + data_start + file_row * width * 4;
    for (std::size_t c = 0; c < width; ++c) {
      out.values[dst_row * width + c] = load_f32(src + 4 * c, little);
    }
  }
  return out;
}

DecodedRaster decode_raw_f32(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) throw ParseError("RawF32 header truncated", bytes.size());
  if (std::memcmp(bytes.data(), "DBF1", 4) != 0) throw ParseError("bad RawF32 magic", 0);
  const auto width = load_u32_le(bytes.data() + 4);
  const auto height = load_u32_le(bytes.data() + 8);
  check_dims(width, height, 4);
  const auto n = static_cast<std::size_t>(width) * height;
  if (bytes.size() - 16 < n * 4) {
    throw ParseError("RawF32 payload truncated: need " + std::to_string(n * 4) + " bytes",
                     bytes.size());
  }
  DecodedRaster out;
  out.width = static_cast<int>(width);
  out.height = static_cast<int>(height);
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = load_f32(bytes.data() + 16 + 4 * i, true);
  return out;
}

DecodedRaster decode_png_gray(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0) {
    throw ParseError("bad PNG signature", 0);
  }
  DecodedRaster out;
  PngErrorSlot err;
  std::size_t consumed = 0;
  switch (decode_png_impl(bytes, out, err, consumed)) {
    case PngStatus::Ok: break;
    case PngStatus::NotGray: throw StructuralError("PNG is not single-channel grayscale");
    case PngStatus::Failed: throw ParseError(std::string("PNG decode failed: ") + err.message, consumed);
  }
  check_dims(static_cast<std::uint64_t>(out.width), static_cast<std::uint64_t>(out.height), 16);
  return out;
}

std::vector<std::uint8_t> encode_pfm(const Field& field) {
  const std::string header = "Pf\n" + std::to_string(field.width()) + " " +
                             std::to_string(field.height()) + "\n-1.0\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + field.size() * 4);
  for (int r = field.height() - 1; r >= 0; --r) {
    for (int c = 0; c < field.width(); ++c) {
      const float v = field.valid_at(r, c) ? static_cast<float>(field.at(r, c))
                                           : std::numeric_limits<float>::quiet_NaN();
      store_f32_le(out, v);
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_raw_f32(const Field& field) {
  std::vector<std::uint8_t> out{'D', 'B', 'F', '1'};
  out.reserve(16 + field.size() * 4);
  store_u32_le(out, static_cast<std::uint32_t>(field.width()));
  store_u32_le(out, static_cast<std::uint32_t>(field.height()));
  store_u32_le(out, 0);
  const auto values = field.values();
  const auto valid = field.valid();
  for (std::size_t i = 0; i < values.size(); ++i) {
    store_f32_le(out, valid[i] ? static_cast<float>(values[i])
                               : std::numeric_limits<float>::quiet_NaN());
  }
  return out;
}

std::vector<std::uint8_t> encode_png16(const Field& field, double scale) {
  if (!(scale > 0.0)) throw DomainError("PNG16 scale must be > 0");
  std::vector<std::uint16_t> codes(field.size(), 0);
  const auto values = field.values();
  const auto valid = field.valid();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!valid[i] || !std::isfinite(values[i])) continue;
    // Valid pixels never collapse onto the invalid sentinel.
    const double code = std::clamp(std::round(values[i] / scale), 1.0, 65535.0);
    codes[i] = static_cast<std::uint16_t>(code);
  }
  std::vector<std::uint8_t> out;
  PngErrorSlot err;
  if (!encode_png16_impl(codes, field.width(), field.height(), out, err)) {
    throw IoError(std::string("PNG encode failed: ") + err.message);
  }
  return out;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + p.string());
  return bytes;
}

void write_bytes(const std::filesystem::path& p, std::span<const std::uint8_t> bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + p.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed for " + p.string());
}

DepthMap decode_depth(std::span<const std::uint8_t> bytes, Format format, double scale,
                      const ValidityPolicy& policy) {
  DecodedRaster raw;
  bool zero_is_invalid = false;
  switch (format) {
    case Format::PFM: raw = decode_pfm(bytes); break;
    case Format::RawF32: raw = decode_raw_f32(bytes); break;
    case Format::PNG16:
    case Format::MaskPNG:
      raw = decode_png_gray(bytes);
      zero_is_invalid = true;
      break;
  }
  std::vector<std::uint8_t> valid(raw.values.size(), 0);
  for (std::size_t i = 0; i < raw.values.size(); ++i) {
    double& v = raw.values[i];
    if (!std::isfinite(v) || (zero_is_invalid && v == 0.0)) {
      v = 0.0;
      continue;
    }
    v *= scale;
    valid[i] = policy.accepts(v) ? 1 : 0;
  }
  return DepthMap(raw.width, raw.height, std::move(raw.values), std::move(valid));
}

DepthMap load_depth(const RasterFile& file, const ValidityPolicy& policy) {
  const auto bytes = read_bytes(file.path);
  return decode_depth(bytes, file.format, file.scale, policy);
}

InverseDepthMap load_inverse_depth(const RasterFile& file) {
  const auto bytes = read_bytes(file.path);
  DecodedRaster raw;
  bool zero_is_invalid = false;
  switch (file.format) {
    case Format::PFM: raw = decode_pfm(bytes); break;
    case Format::RawF32: raw = decode_raw_f32(bytes); break;
    case Format::PNG16:
    case Format::MaskPNG:
      raw = decode_png_gray(bytes);
      zero_is_invalid = true;
      break;
  }
  std::vector<std::uint8_t> valid(raw.values.size(), 0);
  for (std::size_t i = 0; i < raw.values.size(); ++i) {
    double& v = raw.values[i];
    if (!std::isfinite(v) || (zero_is_invalid && v == 0.0)) {
      v = 0.0;
      continue;
    }
    v *= file.scale;
    valid[i] = 1;
  }
  InverseDepthMap out(raw.width, raw.height, std::move(raw.values), std::move(valid));
  out.require_non_negative(file.path.string().c_str());
  return out;
}

AlphaMatte load_matte(const RasterFile& file) {
  const auto raw = decode_png_gray(read_bytes(file.path));
  const double full_scale = raw.bit_depth == 16 ? 65535.0 : 255.0;
  std::vector<double> alpha(raw.values.size());
  std::transform(raw.values.begin(), raw.values.end(), alpha.begin(),
                 [&](double v) { return v / full_scale; });
  return AlphaMatte(raw.width, raw.height, std::move(alpha));
}

BinaryMask load_mask(const RasterFile& file, double alpha_threshold) {
  return load_matte(file).threshold(alpha_threshold);
}

void save_raster(const Field& field, const RasterFile& file) {
  std::vector<std::uint8_t> bytes;
  switch (file.format) {
    case Format::PFM: bytes = encode_pfm(field); break;
    case Format::RawF32: bytes = encode_raw_f32(field); break;
    case Format::PNG16:
    case Format::MaskPNG: bytes = encode_png16(field, file.scale); break;
  }
  write_bytes(file.path, bytes);
}

}  // namespace depthbench::io
