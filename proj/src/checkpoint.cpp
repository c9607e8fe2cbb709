#include "lcd/checkpoint.hpp"

#include <bit>
#include <boost/crc.hpp>
#include <cstring>
#include <fstream>
#include <iterator>

namespace lcd {

namespace {

std::uint32_t crc32(const std::uint8_t* data, std::size_t n) {
  boost::crc_32_type crc;
  crc.process_bytes(data, n);
  return crc.checksum();
}

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  Reader(const std::vector<std::uint8_t>& in, std::size_t pos) : in_(in), pos_(pos) {}
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_++]) << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
    return std::bit_cast<double>(bits);
  }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw CheckpointError("truncated checkpoint");
  }
  const std::vector<std::uint8_t>& in_;
  std::size_t pos_;
};

void write_field(Writer& w, const SpectralField& F) {
  for (Eigen::Index c = 0; c < F.coeffs().cols(); ++c)
    for (Eigen::Index p = 0; p < F.coeffs().rows(); ++p) {
      w.f64(F.coeffs()(p, c).real());
      w.f64(F.coeffs()(p, c).imag());
    }
}

void read_field(Reader& r, SpectralField& F) {
  for (Eigen::Index c = 0; c < F.coeffs().cols(); ++c)
    for (Eigen::Index p = 0; p < F.coeffs().rows(); ++p) {
      const double re = r.f64();
      const double im = r.f64();
      F.coeffs()(p, c) = Complex(re, im);
    }
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const State& state, const PhysicsParams& params) {
  const Grid& g = state.grid();
  std::vector<std::uint8_t> out;
  out.reserve(kCheckpointHeaderBytes + 2 * 3 * 16 * static_cast<std::size_t>(g.size()) + 4);
  out.resize(sizeof kCheckpointMagic);
  std::memcpy(out.data(), kCheckpointMagic, sizeof kCheckpointMagic);
  Writer w(out);
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(g.resolution()));
  w.f64(g.box_length());
  w.f64(state.t);
  w.f64(params.eta);
  w.f64(params.nu);
  for (int i = 0; i < 3; ++i) w.f64(state.w0(i));
  w.u32(crc32(out.data(), out.size()));

  const std::size_t payload_start = out.size();
  write_field(w, state.u_hat);
  write_field(w, state.d_hat);
  w.u32(crc32(out.data() + payload_start, out.size() - payload_start));
  return out;
}

CheckpointHeader decode_checkpoint_header(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kCheckpointHeaderBytes) throw CheckpointError("file too short for a header");
  if (std::memcmp(bytes.data(), kCheckpointMagic, sizeof kCheckpointMagic) != 0)
    throw CheckpointError("bad magic, not an LCDSPEC1 checkpoint");
  Reader r(bytes, sizeof kCheckpointMagic);
  CheckpointHeader h;
  h.version = r.u32();
  h.N = static_cast<int>(r.u32());
  h.L = r.f64();
  h.t = r.f64();
  h.eta = r.f64();
  h.nu = r.f64();
  for (int i = 0; i < 3; ++i) h.w0(i) = r.f64();
  const std::uint32_t stored = r.u32();
  if (stored != crc32(bytes.data(), kCheckpointHeaderBytes - 4))
    throw CheckpointError("header CRC mismatch");
  if (h.version != kCheckpointVersion)
    throw CheckpointError("unsupported version " + std::to_string(h.version));
  return h;
}

Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes, GridPtr grid) {
  Checkpoint ck;
  ck.header = decode_checkpoint_header(bytes);
  if (!grid) grid = Grid::create(ck.header.L, ck.header.N);
  if (grid->resolution() != ck.header.N || grid->box_length() != ck.header.L)
    throw CheckpointError("grid N=" + std::to_string(grid->resolution()) + " L=" +
                          std::to_string(grid->box_length()) + " does not match checkpoint N=" +
                          std::to_string(ck.header.N) + " L=" + std::to_string(ck.header.L));

  const std::size_t payload = 2 * 3 * 16 * static_cast<std::size_t>(grid->size());
  if (bytes.size() != kCheckpointHeaderBytes + payload + 4)
    throw CheckpointError("payload length " + std::to_string(bytes.size()) + " does not match N=" +
                          std::to_string(ck.header.N));
  Reader crc_reader(bytes, kCheckpointHeaderBytes + payload);
  if (crc_reader.u32() != crc32(bytes.data() + kCheckpointHeaderBytes, payload))
    throw CheckpointError("payload CRC mismatch");

  ck.state = State::rest(grid, ck.header.w0);
  ck.state.t = ck.header.t;
  Reader r(bytes, kCheckpointHeaderBytes);
  read_field(r, ck.state.u_hat);
  read_field(r, ck.state.d_hat);
  return ck;
}

void save_checkpoint(const std::string& path, const State& state, const PhysicsParams& params) {
  const auto bytes = encode_checkpoint(state, params);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot open " + tmp + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CheckpointError("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw CheckpointError("cannot move " + tmp + " to " + path);
}

Checkpoint load_checkpoint(const std::string& path, GridPtr grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes, std::move(grid));
}

}  // namespace lcd
