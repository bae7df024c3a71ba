#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "blowup/error.hpp"
#include "blowup/profile_io.hpp"
#include "support.hpp"

using namespace blowup;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("blowup_io_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Errc load_error(const fs::path& p) {
  try {
    load_profile_cache(p);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "loaded " << p;
  return Errc::InvalidInput;
}

}  // namespace

TEST(ProfileIo, RoundTripIsExact) {
  const auto dir = scratch("roundtrip");
  const auto& B = blowup::testing::basis135();
  const fs::path f = dir / "c.json";
  save_profile_cache(f, blowup::testing::table135(), B.gs, {&B.LambdaQ});
  const ProfileCache c = load_profile_cache(f);
  EXPECT_EQ(c.d, 13);
  EXPECT_EQ(c.p, 5);
  EXPECT_TRUE(c.spec == B.grid->spec());
  ASSERT_EQ(c.gs.Q.f.size(), B.gs.Q.f.size());
  for (std::size_t j = 0; j < c.gs.Q.f.size(); ++j) {
    ASSERT_EQ(c.gs.Q.f[j], B.gs.Q.f[j]);
    ASSERT_EQ(c.gs.w[j], B.gs.w[j]);
  }
  ASSERT_TRUE(c.extra.count(B.LambdaQ.name));
  EXPECT_EQ(c.extra.at(B.LambdaQ.name).f, B.LambdaQ.f);
  fs::remove_all(dir);
}

TEST(ProfileIo, CorruptFilesAreRejected) {
  const auto dir = scratch("corrupt");
  const auto& B = blowup::testing::basis135();
  const fs::path f = dir / "c.json";
  save_profile_cache(f, blowup::testing::table135(), B.gs);
  std::string text = slurp(f);
  const auto at = text.find("\"w\":[") + 6;
  text[at] = text[at] == '1' ? '2' : '1';
  std::ofstream(dir / "flipped.json") << text;
  EXPECT_EQ(load_error(dir / "flipped.json"), Errc::CacheCorrupt);
  std::ofstream(dir / "truncated.json") << text.substr(0, text.size() / 2);
  EXPECT_EQ(load_error(dir / "truncated.json"), Errc::CacheCorrupt);
  std::ofstream(dir / "other.json") << R"({"format": "something else"})";
  EXPECT_EQ(load_error(dir / "other.json"), Errc::CacheCorrupt);
  EXPECT_EQ(load_error(dir / "missing.json"), Errc::InvalidInput);
  fs::remove_all(dir);
}

TEST(ProfileIo, CacheMissThenHit) {
  const auto dir = scratch("cache");
  const auto& t = blowup::testing::table135();
  const auto grid = blowup::testing::default_grid();
  const CachedGroundState a = cached_ground_state(t, grid, dir);
  EXPECT_FALSE(a.hit);
  EXPECT_EQ(a.path.filename().string().rfind("profile_d13_p5_", 0), 0u);
  const CachedGroundState b = cached_ground_state(t, grid, dir);
  EXPECT_TRUE(b.hit);
  EXPECT_EQ(a.gs.Q.f, b.gs.Q.f);
  append_ladder(a.path, blowup::testing::basis135().ladder);
  const ProfileCache c = load_profile_cache(a.path);
  EXPECT_TRUE(c.extra.count("T0_n0"));
  EXPECT_TRUE(c.extra.count("Theta1_n0"));
  fs::remove_all(dir);
}

TEST(ProfileIo, CsvKeepsFullPrecision) {
  const auto dir = scratch("csv");
  const std::vector<double> a{0.1, 1.0 / 3}, b{-2.5e-300, 7.0};
  write_csv(dir / "x.csv", {"a", "b"}, {&a, &b});
  std::ifstream in(dir / "x.csv");
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header, "a,b");
  std::getline(in, row);
  std::getline(in, row);
  EXPECT_EQ(std::stod(row.substr(0, row.find(','))), 1.0 / 3);
  const std::vector<double> shorter{1.0};
  EXPECT_THROW(write_csv(dir / "y.csv", {"a", "b"}, {&a, &shorter}), Error);
  fs::remove_all(dir);
}
