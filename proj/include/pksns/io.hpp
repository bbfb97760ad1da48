#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pksns/solver.hpp"

namespace pksns {

/// Frozen CSV column order.
const std::string& series_header();
/// One CSV line (no newline), numbers with 17 significant digits.
std::string series_line(const SeriesRow& row);
void write_series(std::ostream& out, const std::vector<SeriesRow>& rows);
/// Writes header and rows; IoError names the path.
void write_series(const std::string& path, const std::vector<SeriesRow>& rows);

/// Binary checkpoint: "PKSN", u32 version 1, u8 dim, u32 n[3], f64 t, A,
/// drift, t_last_remap, mass, then n and each u component as little-endian
/// (re, im) f64 pairs in flat wavevector order, then the CRC32 of
/// everything before it.
std::vector<std::uint8_t> encode_checkpoint(const State& s, double A);

struct Checkpoint {
  State state;
  double A = 1.0;
};
/// Throws CheckpointError on bad magic, version, size or CRC; never returns
/// a partial state.
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void write_checkpoint(const std::string& path, const State& s, double A);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace pksns
