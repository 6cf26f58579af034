#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace tst::mc {

/// Append-only binary measurement log. Layout: the 8-byte magic "TSTTRACE",
/// a little-endian u32 version, then fixed 20-byte records
/// (u64 sweep, i32 observable, f64 energy).
class TraceWriter {
public:
  explicit TraceWriter(const std::string& path);
  void record(std::uint64_t sweep, std::int32_t observable, double energy);
  void flush() { out_.flush(); }

private:
  std::ofstream out_;
};

struct TraceRecord {
  std::uint64_t sweep;
  std::int32_t observable;
  double energy;
};

/// Throws ParseError on a bad header or truncated record.
std::vector<TraceRecord> read_trace(const std::string& path);

} // namespace tst::mc
