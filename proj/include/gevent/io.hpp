#pragma once

// Binary file formats (little-endian, no padding):
//
// PhotonCube (.phc):  "PHC1" u32 W, H, T; f64 alpha, dark, binary_frame_rate;
//                     T frames of ceil(W*H/8) bytes, row-major, MSB first.
// EventStream (.gev): "GEV1" u16 version=1; u8 method; u32 W, H, T; u8 quant_bits;
//                     method block; u64 packet_count; packets of
//                     u32 t, u16 x, u16 y, u8 flags, u16 quantized values.
//
// Method blocks:  dvs   f64 tau, f64 gamma_ema
//                 ema   f64 tau, f64 gamma_ema, u32 warmup
//                 bayes f64 gamma, u16 forecasters
//                 chunk f64 tau, u16 chunk_size, u16 patch
//                 coded f64 z, u16 t_code, u16 J, u16 N, u64 mask_seed
// Packet flags:   bits 0-1 payload kind (0 scalar, 1 patch, 2 coded),
//                 bit 2 coded long value present.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gevent/event_model.hpp"
#include "gevent/photon_sim.hpp"
#include "gevent/reconstruct.hpp"

namespace gevent::io {

inline constexpr std::uint16_t kStreamVersion = 1;

void write_photon_cube(std::ostream& out, const PhotonCube& cube);
PhotonCube read_photon_cube(std::istream& in);
void write_photon_cube(const std::filesystem::path& path, const PhotonCube& cube);
PhotonCube read_photon_cube(const std::filesystem::path& path);

// Values are quantized with config.quant_bits on write.
void write_event_stream(std::ostream& out, const EventStream& stream);
EventStream read_event_stream(std::istream& in);
void write_event_stream(const std::filesystem::path& path, const EventStream& stream);
EventStream read_event_stream(const std::filesystem::path& path);

enum class Gamma { linear, srgb };
Gamma parse_gamma(const std::string& name);

// Standard sRGB electro-optical transfer function on [0,1].
double srgb_to_linear(double v);

struct GrayImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t maxval = 255;
    std::vector<std::uint16_t> pixels;
};

GrayImage read_pgm(std::istream& in);
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const GrayImage& image);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

// Directory of P5 PGM frames in lexicographic order -> linear flux in [0,1].
FluxVideo read_flux_video(const std::filesystem::path& dir, Gamma gamma, double frame_rate = kDefaultVideoFps);
// Linear 16-bit frames (values clamped to [0,1]); names frame_00000.pgm, ...
void write_flux_video(const std::filesystem::path& dir, const FluxVideo& video);

// 16-bit PGM frames of the sampled values scaled by 65535.
void write_frames(const BacktrackedCube& cube, const std::filesystem::path& dir);

// Hot-pixel mask as an 8-bit PGM, nonzero = hot.
HotPixelMask read_hot_mask(const std::filesystem::path& path);
void write_hot_mask(const std::filesystem::path& path, const HotPixelMask& mask);

// Whitespace-tolerant sequence of '0'/'1' characters.
std::vector<std::uint8_t> read_bit_series(std::istream& in);

}  // namespace gevent::io
