#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "evdepth/types.hpp"

namespace evdepth {

enum class EventFormat { Binary, Csv };

// EVT1 binary layout (little-endian):
//   magic 'E','V','T','1', u16 width, u16 height, u64 count,
//   then count records of 16 bytes: u16 x, u16 y, u64 t, i8 p, 3 pad bytes.
// CSV layout: header line "x,y,t,p", one decimal-integer record per line.
// CSV carries no geometry, so the caller declares it; geometry is never
// inferred from the data. For EVT1 the header geometry wins.
//
// Parsing validates coordinate bounds, polarity in {-1,+1}, and
// nondecreasing timestamps; violations raise BadRecord /
// NonMonotonicTimestamp.
EventStream parse_events(const std::uint8_t* bytes, std::size_t len,
                         EventFormat format, std::uint16_t csv_width = 0,
                         std::uint16_t csv_height = 0);
EventStream parse_events(const std::vector<std::uint8_t>& bytes,
                         EventFormat format, std::uint16_t csv_width = 0,
                         std::uint16_t csv_height = 0);

// Lossless inverse of parse_events (bit-exact in binary).
std::vector<std::uint8_t> write_events(const EventStream& stream,
                                       EventFormat format);

// File helpers; format inferred from the extension (".csv" -> CSV, else EVT1).
EventFormat format_from_path(const std::filesystem::path& path);
EventStream load_events(const std::filesystem::path& path,
                        std::uint16_t csv_width = 0,
                        std::uint16_t csv_height = 0);
void save_events(const std::filesystem::path& path, const EventStream& stream);

}  // namespace evdepth
