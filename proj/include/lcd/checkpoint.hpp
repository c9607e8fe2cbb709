#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcd/dynamics.hpp"

namespace lcd {

/// Binary checkpoint layout, all little-endian:
///
///   offset  size  field
///        0     8  magic "LCDSPEC1"
///        8     4  version (uint32, currently 1)
///       12     4  N (uint32)
///       16     8  L (float64)
///       24     8  t
///       32     8  eta
///       40     8  nu
///       48    24  w0 (3 x float64)
///       72     4  CRC-32 of bytes [0, 72)
///       76     -  payload: u_hat then d_hat, each 3 components x N^3 modes of
///                 (re, im) float64 pairs, component-major with m3 fastest
///      end     4  CRC-32 of the payload
inline constexpr char kCheckpointMagic[8] = {'L', 'C', 'D', 'S', 'P', 'E', 'C', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::size_t kCheckpointHeaderBytes = 76;

struct CheckpointHeader {
  std::uint32_t version = kCheckpointVersion;
  int N = 0;
  double L = 0.0;
  double t = 0.0;
  double eta = 0.0;
  double nu = 0.0;
  Eigen::Vector3d w0 = Eigen::Vector3d::UnitZ();
};

struct Checkpoint {
  CheckpointHeader header;
  State state;
};

std::vector<std::uint8_t> encode_checkpoint(const State& state, const PhysicsParams& params);

/// Decode and verify both CRCs. A grid is created unless one matching the
/// header is supplied.
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes, GridPtr grid = nullptr);

/// Header only, CRC-verified.
CheckpointHeader decode_checkpoint_header(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const std::string& path, const State& state, const PhysicsParams& params);
Checkpoint load_checkpoint(const std::string& path, GridPtr grid = nullptr);

}  // namespace lcd
