#include "ntlab/table_cache.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "ntlab/errors.hpp"

namespace ntlab {

namespace {

constexpr std::array<char, 4> kMagic{'N', 'T', 'M', 'C'};

template <typename T>
void put_le(std::vector<unsigned char>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<unsigned char>((value >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(const unsigned char* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
  return v;
}

void invalid(const std::filesystem::path& path, const std::string& why) {
  fail(ErrorKind::CacheInvalid, "cache " + path.string() + ": " + why);
}

}  // namespace

void write_table_cache(const std::filesystem::path& path, const ArithTable& table, std::uint32_t version) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::vector<unsigned char> header;
  header.insert(header.end(), kMagic.begin(), kMagic.end());
  put_le<std::uint32_t>(header, version);
  header.push_back(static_cast<unsigned char>(table.kind()));
  put_le<std::uint64_t>(header, table.limit());

  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::ResourceLimit, "cannot write cache " + tmp);
    out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
    std::vector<unsigned char> buf;
    constexpr std::size_t kChunk = 1 << 16;
    buf.reserve(kChunk * 16);
    for (std::uint64_t n = 1; n <= table.limit(); ++n) {
      if (table.kind() == ArithKind::RamanujanTau) {
        const auto v = static_cast<unsigned __int128>(table.tau()[n]);
        put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(v));
        put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(v >> 64));
      } else {
        put_le<std::uint64_t>(buf, table.counts()[n]);
      }
      if (buf.size() >= kChunk * 8) {
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        buf.clear();
      }
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    require(static_cast<bool>(out), ErrorKind::ResourceLimit, "short write on cache " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

ArithTable read_table_cache(const std::filesystem::path& path, std::optional<ArithKind> expected_kind,
                            std::optional<std::uint64_t> expected_limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid(path, "cannot open");
  std::array<unsigned char, 17> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in.gcount() != static_cast<std::streamsize>(header.size())) invalid(path, "truncated header");
  if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0) invalid(path, "bad magic");
  const auto version = get_le<std::uint32_t>(header.data() + 4);
  if (version != kTableCacheVersion) invalid(path, "format version " + std::to_string(version));
  const auto kind_tag = header[8];
  if (kind_tag > 2) invalid(path, "unknown kind tag");
  const auto kind = static_cast<ArithKind>(kind_tag);
  if (expected_kind && *expected_kind != kind) invalid(path, "kind mismatch");
  const auto limit = get_le<std::uint64_t>(header.data() + 9);
  if (limit == 0) invalid(path, "zero limit");
  if (expected_limit && *expected_limit != limit) invalid(path, "limit mismatch");

  const std::uint64_t words = kind == ArithKind::RamanujanTau ? 2 : 1;
  const auto expected_bytes = static_cast<std::uintmax_t>(header.size() + limit * words * 8);
  std::error_code ec;
  if (std::filesystem::file_size(path, ec) != expected_bytes || ec) invalid(path, "size mismatch");

  std::vector<unsigned char> body(limit * words * 8);
  in.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(body.size()));
  if (in.gcount() != static_cast<std::streamsize>(body.size())) invalid(path, "truncated body");

  if (kind == ArithKind::RamanujanTau) {
    std::vector<wide_int> tau(limit + 1, 0);
    for (std::uint64_t n = 1; n <= limit; ++n) {
      const unsigned char* p = body.data() + (n - 1) * 16;
      const auto lo = static_cast<unsigned __int128>(get_le<std::uint64_t>(p));
      const auto hi = static_cast<unsigned __int128>(get_le<std::uint64_t>(p + 8));
      tau[n] = static_cast<wide_int>((hi << 64) | lo);
    }
    return ArithTable(std::move(tau));
  }
  std::vector<std::uint32_t> counts(limit + 1, 0);
  for (std::uint64_t n = 1; n <= limit; ++n) {
    const auto v = get_le<std::uint64_t>(body.data() + (n - 1) * 8);
    if (v > 0xFFFFFFFFull) invalid(path, "value out of range");
    counts[n] = static_cast<std::uint32_t>(v);
  }
  return ArithTable(kind, std::move(counts));
}

std::filesystem::path table_cache_path(const std::filesystem::path& dir, ArithKind kind, std::uint64_t limit) {
  return dir / ("arith_" + std::string(to_string(kind)) + "_" + std::to_string(limit) + "_v" +
                std::to_string(kTableCacheVersion) + ".ntmc");
}

CachedTable load_or_build_table(const std::filesystem::path& dir, ArithKind kind, std::uint64_t limit,
                                const TableBudget& budget) {
  const auto path = table_cache_path(dir, kind, limit);
  if (std::filesystem::exists(path)) {
    try {
      return {read_table_cache(path, kind, limit), true};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CacheInvalid) throw;
    }
  }
  CachedTable built{build_table(kind, limit, budget), false};
  write_table_cache(path, built.table);
  return built;
}

ArithTable cache_roundtrip(const ArithTable& table, const std::filesystem::path& dir) {
  const auto path = table_cache_path(dir, table.kind(), table.limit());
  write_table_cache(path, table);
  return read_table_cache(path, table.kind(), table.limit());
}

}  // namespace ntlab
