#include "tst/mc/trace.hpp"
#include "tst/error.hpp"

#include <cstring>

namespace tst::mc {

namespace {

constexpr char kMagic[8] = {'T', 'S', 'T', 'T', 'R', 'A', 'C', 'E'};
constexpr std::uint32_t kVersion = 1;

template <typename T> void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T> bool get(std::ifstream& in, T& v) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof v));
}

} // namespace

TraceWriter::TraceWriter(const std::string& path) : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw InvalidParam("cannot open trace file " + path);
  out_.write(kMagic, sizeof kMagic);
  put(out_, kVersion);
}

void TraceWriter::record(std::uint64_t sweep, std::int32_t observable, double energy) {
  put(out_, sweep);
  put(out_, observable);
  put(out_, energy);
}

std::vector<TraceRecord> read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open trace file " + path);
  char magic[8];
  std::uint32_t version = 0;
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0 ||
      !get(in, version) || version != kVersion) {
    throw ParseError(path + ": not a trace file");
  }
  std::vector<TraceRecord> out;
  while (true) {
    TraceRecord r{};
    if (!get(in, r.sweep)) break;
    if (!get(in, r.observable) || !get(in, r.energy)) {
      throw ParseError(path + ": truncated record " + std::to_string(out.size()));
    }
    out.push_back(r);
  }
  return out;
}

} // namespace tst::mc
