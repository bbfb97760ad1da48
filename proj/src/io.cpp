#include "pksns/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>

#include "pksns/errors.hpp"

namespace pksns {

namespace {

constexpr char kMagic[4] = {'P', 'K', 'S', 'N'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 4 + 1 + 3 * 4 + 5 * 8;

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
  std::uint8_t b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.insert(out.end(), b, b + sizeof(T));
}

template <typename T>
T get(const std::vector<std::uint8_t>& in, std::size_t& pos) {
  std::uint8_t b[sizeof(T)];
  std::memcpy(b, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  pos += sizeof(T);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

std::uint32_t crc(const std::uint8_t* data, std::size_t n) {
  uLong c = crc32(0L, Z_NULL, 0);
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    c = crc32(c, data, chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(c);
}

void put_block(std::vector<std::uint8_t>& out, const SpectralField& F) {
  for (int c = 0; c < F.components(); ++c) {
    for (Eigen::Index i = 0; i < F.modes(); ++i) {
      put(out, F.coeffs()(i, c).real());
      put(out, F.coeffs()(i, c).imag());
    }
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const void* data, std::size_t n) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(path + ": cannot open for writing");
    f.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    if (!f) throw IoError(path + ": write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError(path + ": " + ec.message());
}

}  // namespace

const std::string& series_header() {
  static const std::string h =
      "t,mass,n_min,n_linf,n_l2,u_l2,div_l2,E11,E12,E21,E22,E3,E4,E51,E52,free_energy,"
      "dropped_energy,dt,status";
  return h;
}

std::string series_line(const SeriesRow& r) {
  const double v[] = {r.t,     r.mass,  r.n_min,  r.n_linf, r.n_l2,  r.u_l2,
                      r.div_l2, r.E.E11, r.E.E12,  r.E.E21,  r.E.E22, r.E.E3,
                      r.E.E4,  r.E.E51, r.E.E52,  r.free_energy, r.dropped_energy, r.dt};
  std::string line;
  for (double x : v) {
    line += fmt(x);
    line += ',';
  }
  line += status_name(r.status);
  return line;
}

void write_series(std::ostream& out, const std::vector<SeriesRow>& rows) {
  out << series_header() << '\n';
  for (const auto& r : rows) out << series_line(r) << '\n';
}

void write_series(const std::string& path, const std::vector<SeriesRow>& rows) {
  std::string text = series_header() + '\n';
  for (const auto& r : rows) text += series_line(r) + '\n';
  write_file(path, text.data(), text.size());
}

std::vector<std::uint8_t> encode_checkpoint(const State& s, double A) {
  const GridSpec& g = s.n.grid();
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + (1 + s.u.components()) * g.size() * 16 + 4);
  out.insert(out.end(), kMagic, kMagic + 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(g.dim));
  for (int a = 0; a < 3; ++a) put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n[a]));
  put(out, s.t);
  put(out, A);
  put(out, s.frame.drift);
  put(out, s.frame.t_last_remap);
  put(out, s.mass());
  put_block(out, s.n);
  put_block(out, s.u);
  put<std::uint32_t>(out, crc(out.data(), out.size()));
  return out;
}

Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& in) {
  if (in.size() < kHeaderBytes + 4) throw CheckpointError("checkpoint truncated (header)");
  const std::size_t body = in.size() - 4;
  std::size_t tail = body;
  const std::uint32_t stored = get<std::uint32_t>(in, tail);
  if (crc(in.data(), body) != stored) throw CheckpointError("checkpoint CRC mismatch");
  if (std::memcmp(in.data(), kMagic, 4) != 0) throw CheckpointError("checkpoint: bad magic");
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(in, pos);
  if (version != kVersion) {
    throw CheckpointError("checkpoint: unsupported format version " + std::to_string(version));
  }
  const int dim = get<std::uint8_t>(in, pos);
  std::array<int, 3> n{};
  for (int a = 0; a < 3; ++a) n[a] = static_cast<int>(get<std::uint32_t>(in, pos));
  GridSpec g;
  try {
    g = GridSpec::make(dim, n);
  } catch (const ContractViolation& e) {
    throw CheckpointError(std::string("checkpoint: bad grid: ") + e.what());
  }
  for (int a = dim; a < 3; ++a) {
    if (n[a] != 1) throw CheckpointError("checkpoint: unused axis must carry one mode");
  }
  Checkpoint ck;
  State& s = ck.state;
  s.t = get<double>(in, pos);
  ck.A = get<double>(in, pos);
  s.frame.drift = get<double>(in, pos);
  s.frame.t_last_remap = get<double>(in, pos);
  const double mass = get<double>(in, pos);

  const std::size_t block = g.size() * 16;
  const std::size_t payload = body - pos;
  if (payload % block != 0) throw CheckpointError("checkpoint: payload does not match the grid");
  const std::size_t blocks = payload / block;
  if (blocks != 1 && blocks != 4) {
    throw CheckpointError("checkpoint: expected n or n plus three velocity components");
  }
  auto read_block = [&](int comps) {
    SpectralField F(g, comps);
    for (int c = 0; c < comps; ++c) {
      for (Eigen::Index i = 0; i < F.modes(); ++i) {
        const double re = get<double>(in, pos);
        const double im = get<double>(in, pos);
        F.coeffs()(i, c) = Complex(re, im);
      }
    }
    return F;
  };
  s.n = read_block(1);
  s.u = read_block(blocks == 4 ? 3 : 0);
  if (s.mass() != mass) throw CheckpointError("checkpoint: stored mass disagrees with n");
  return ck;
}

void write_checkpoint(const std::string& path, const State& s, double A) {
  const auto bytes = encode_checkpoint(s, A);
  write_file(path, bytes.data(), bytes.size());
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(path + ": cannot open checkpoint");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_checkpoint(bytes);
  } catch (const CheckpointError& e) {
    throw CheckpointError(path + ": " + e.what());
  }
}

}  // namespace pksns
