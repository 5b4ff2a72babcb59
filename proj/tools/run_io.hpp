#ifndef LANDAU_TOOLS_RUN_IO_HPP
#define LANDAU_TOOLS_RUN_IO_HPP

// Snapshot files, JSON-lines diagnostics and the run manifest.

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "landau/dynamics.hpp"

namespace landau::tools {

namespace fs = std::filesystem;

enum class SnapshotFormat { csv, binary };

inline std::string snapshot_name(std::int64_t step, SnapshotFormat fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snap_%08lld.%s", static_cast<long long>(step),
                fmt == SnapshotFormat::csv ? "csv" : "bin");
  return buf;
}

/// csv: header line "step,t" with values, then one "vx,vy,vz" row per particle.
/// binary: little-endian float64 array [step, t, v_1x, v_1y, v_1z, ...].
inline void write_snapshot(const fs::path& path, const ParticleState& s, SnapshotFormat fmt) {
  if (fmt == SnapshotFormat::csv) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << std::setprecision(17);
    out << "step,t\n" << s.step_index << ',' << s.t << "\nvx,vy,vz\n";
    for (const auto& v : s.velocities) out << v[0] << ',' << v[1] << ',' << v[2] << '\n';
    return;
  }
  std::vector<double> data;
  data.reserve(2 + 3 * s.size());
  data.push_back(static_cast<double>(s.step_index));
  data.push_back(s.t);
  for (const auto& v : s.velocities) data.insert(data.end(), {v[0], v[1], v[2]});
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  static_assert(sizeof(double) == 8);
  for (double x : data) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    std::array<char, 8> bytes;
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
    out.write(bytes.data(), 8);
  }
}

inline std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

/// Appends one compact JSON object per line.
class JsonlWriter {
 public:
  explicit JsonlWriter(const fs::path& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
  }
  void write(const nlohmann::json& row) {
    out_ << row.dump() << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

inline std::vector<nlohmann::json> read_jsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<nlohmann::json> rows;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) rows.push_back(nlohmann::json::parse(line));
  return rows;
}

}  // namespace landau::tools

#endif  // LANDAU_TOOLS_RUN_IO_HPP
