#pragma once

// Binary cache for ArithTable:
//   "NTMC" | u32 version | u8 kind | u64 limit | values
// all little-endian. d and r store one 64-bit word per value; tau stores two
// (low word, then high word of the signed 128-bit value).

#include <cstdint>
#include <filesystem>
#include <optional>

#include "ntlab/arith_tables.hpp"

namespace ntlab {

inline constexpr std::uint32_t kTableCacheVersion = 1;

void write_table_cache(const std::filesystem::path& path, const ArithTable& table,
                       std::uint32_t version = kTableCacheVersion);

/// Throws Error(CacheInvalid) on bad magic, version, kind, limit or a short file.
ArithTable read_table_cache(const std::filesystem::path& path, std::optional<ArithKind> expected_kind = {},
                            std::optional<std::uint64_t> expected_limit = {});

std::filesystem::path table_cache_path(const std::filesystem::path& dir, ArithKind kind, std::uint64_t limit);

struct CachedTable {
  ArithTable table;
  bool from_cache = false;
};

/// Loads the cached table when it is valid, otherwise builds and (re)writes it.
CachedTable load_or_build_table(const std::filesystem::path& dir, ArithKind kind, std::uint64_t limit,
                                const TableBudget& budget = {});

/// Serialises into dir and reads it back.
ArithTable cache_roundtrip(const ArithTable& table, const std::filesystem::path& dir);

}  // namespace ntlab
