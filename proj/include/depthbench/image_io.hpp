#pragma once

// Depth / inverse-depth / mask file formats.
//
//   PFM     "Pf" grayscale Portable Float Map. The sign of the scale line
//           selects endianness (negative = little-endian); rows are stored
//           bottom-to-top. Non-finite values mark invalid pixels.
//   PNG16   16-bit grayscale PNG of integer codes; value = code * scale.
//           Code 0 marks an invalid pixel.
//   RawF32  16-byte header: magic "DBF1", u32 width, u32 height, u32 reserved
//           (all little-endian), then width*height little-endian float32 in
//           row-major order, top row first. Non-finite values are invalid.
//   MaskPNG 8- or 16-bit grayscale PNG read as an alpha matte in [0, 1].

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depthbench/raster.hpp"

namespace depthbench::io {

enum class Format { PFM, PNG16, RawF32, MaskPNG };

std::string to_string(Format f);

struct RasterFile {
  std::filesystem::path path;
  Format format;
  double scale = 1.0;

  /// Format inferred from the extension (.pfm, .png, .dbf/.f32/.raw).
  explicit RasterFile(std::filesystem::path p, double scale = 1.0);
  RasterFile(std::filesystem::path p, Format f, double scale = 1.0);
};

std::optional<Format> format_from_extension(const std::filesystem::path& p);

/// Decoded pixel payload before any unit or validity interpretation.
struct DecodedRaster {
  int width = 0;
  int height = 0;
  int bit_depth = 32;        // 8 or 16 for PNG, 32 for float formats
  std::vector<double> values;
};

DecodedRaster decode_pfm(std::span<const std::uint8_t> bytes);
DecodedRaster decode_raw_f32(std::span<const std::uint8_t> bytes);
/// Grayscale only; multi-channel PNGs raise StructuralError.
DecodedRaster decode_png_gray(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_pfm(const Field& field);
std::vector<std::uint8_t> encode_raw_f32(const Field& field);
std::vector<std::uint8_t> encode_png16(const Field& field, double scale);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p);
void write_bytes(const std::filesystem::path& p, std::span<const std::uint8_t> bytes);

/// Loads metric depth, marks sentinel / non-finite pixels invalid, then
/// applies `policy`.
DepthMap load_depth(const RasterFile& file, const ValidityPolicy& policy);
DepthMap decode_depth(std::span<const std::uint8_t> bytes, Format format, double scale,
                      const ValidityPolicy& policy);

/// Loads canonical inverse depth. Non-finite values (PFM/RawF32) or code 0
/// (PNG16) are invalid.
InverseDepthMap load_inverse_depth(const RasterFile& file);

AlphaMatte load_matte(const RasterFile& file);
/// Pixels whose normalized matte value exceeds `alpha_threshold` are foreground.
BinaryMask load_mask(const RasterFile& file, double alpha_threshold = 0.1);

/// Invalid pixels are written as NaN (PFM, RawF32) or code 0 (PNG16).
void save_raster(const Field& field, const RasterFile& file);

}  // namespace depthbench::io
