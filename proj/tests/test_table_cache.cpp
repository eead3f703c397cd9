#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ntlab/errors.hpp"
#include "ntlab/table_cache.hpp"
#include "test_util.hpp"

using namespace ntlab;
namespace fs = std::filesystem;

TEST_SUITE("table_cache") {

TEST_CASE("divisor table of limit 10^6 survives a roundtrip") {
  const auto dir = testing::scratch_dir("roundtrip");
  const auto t = build_table(ArithKind::Divisor, 1000000);
  const auto back = cache_roundtrip(t, dir);
  CHECK(back == t);
  CHECK(back.kind() == ArithKind::Divisor);
  CHECK(back.limit() == 1000000);
}

TEST_CASE("tau roundtrip keeps negative 128-bit values") {
  const auto dir = testing::scratch_dir("tau");
  const auto t = build_table(ArithKind::RamanujanTau, 5000);
  CHECK(cache_roundtrip(t, dir) == t);
}

TEST_CASE("second load comes from the cache") {
  const auto dir = testing::scratch_dir("reuse");
  const auto first = load_or_build_table(dir, ArithKind::TwoSquares, 20000);
  CHECK_FALSE(first.from_cache);
  const auto second = load_or_build_table(dir, ArithKind::TwoSquares, 20000);
  CHECK(second.from_cache);
  CHECK(second.table == first.table);
}

TEST_CASE("truncated file takes the rebuild path") {
  const auto dir = testing::scratch_dir("truncated");
  const auto path = table_cache_path(dir, ArithKind::Divisor, 50000);
  load_or_build_table(dir, ArithKind::Divisor, 50000);
  fs::resize_file(path, fs::file_size(path) / 2);
  CHECK_THROWS_AS(read_table_cache(path), Error);
  const auto again = load_or_build_table(dir, ArithKind::Divisor, 50000);
  CHECK_FALSE(again.from_cache);
  CHECK(again.table == build_table(ArithKind::Divisor, 50000));
  CHECK(load_or_build_table(dir, ArithKind::Divisor, 50000).from_cache);
}

TEST_CASE("version bump takes the rebuild path") {
  const auto dir = testing::scratch_dir("version");
  const auto path = table_cache_path(dir, ArithKind::Divisor, 1000);
  write_table_cache(path, build_table(ArithKind::Divisor, 1000), kTableCacheVersion + 1);
  try {
    read_table_cache(path);
    FAIL("expected cache-invalid");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CacheInvalid);
  }
  CHECK_FALSE(load_or_build_table(dir, ArithKind::Divisor, 1000).from_cache);
  CHECK(load_or_build_table(dir, ArithKind::Divisor, 1000).from_cache);
}

TEST_CASE("corrupted magic and mismatched kind are rejected") {
  const auto dir = testing::scratch_dir("magic");
  const auto path = table_cache_path(dir, ArithKind::Divisor, 100);
  write_table_cache(path, build_table(ArithKind::Divisor, 100));
  CHECK_THROWS_AS(read_table_cache(path, ArithKind::TwoSquares), Error);
  CHECK_THROWS_AS(read_table_cache(path, ArithKind::Divisor, 101), Error);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  CHECK_THROWS_AS(read_table_cache(path), Error);
  CHECK_FALSE(load_or_build_table(dir, ArithKind::Divisor, 100).from_cache);
}

TEST_CASE("file names are distinct per kind and limit") {
  CHECK(table_cache_path("c", ArithKind::Divisor, 10) != table_cache_path("c", ArithKind::TwoSquares, 10));
  CHECK(table_cache_path("c", ArithKind::Divisor, 10) != table_cache_path("c", ArithKind::Divisor, 11));
}

}
