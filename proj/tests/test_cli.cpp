// Command-line front end: parsing, determinism, reference verification,
// fault injection and the result cache.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "synk/labels.hpp"
#include "synk/table.hpp"

using namespace synk;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string bin() { return std::string(SYNK_BIN); }

int run(const std::string& args, std::string* out = nullptr) {
  fs::path tmp = fs::temp_directory_path() / "synk_cli_out.txt";
  int rc = std::system((bin() + " " + args + " > " + tmp.string() + " 2>&1").c_str());
  if (out) {
    std::ifstream f(tmp);
    std::stringstream ss;
    ss << f.rdbuf();
    *out = ss.str();
  }
  return rc;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("flag validation") {
  std::string out;
  CHECK(run("compute --label q2 --n 2 --weights 0..4", &out) != 0);
  CHECK(run("compute --n 2", &out) != 0);  // needs --label or --eisenstein
  CHECK(run("compute --label q2 --n 2 --weights nonsense", &out) != 0);
  CHECK(run("compute --p 2 --eisenstein \"z^2+z+2\" --n 2", &out) != 0);
  CHECK(run("compute --p 2 --f 2 --eisenstein \"z-2\" --n 2", &out) != 0);
  CHECK(out.find("not yet supported") != std::string::npos);
}

TEST_CASE("show-labels lists every bundled field") {
  std::string out;
  REQUIRE(run("show-labels", &out) == 0);
  for (const auto& L : bundled_labels())
    CHECK(out.find(L.label) != std::string::npos);
}

TEST_CASE("determinism: identical runs produce byte-identical files") {
  fs::path a = fs::temp_directory_path() / "synk_det_a.json";
  fs::path b = fs::temp_directory_path() / "synk_det_b.json";
  std::string cmd = "compute --label q2 --n 2 --weights 1..3 --format machine --out ";
  REQUIRE(run(cmd + a.string()) == 0);
  REQUIRE(run(cmd + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
}

TEST_CASE("machine format round-trips through verify --against") {
  fs::path ref = fs::temp_directory_path() / "synk_against.json";
  REQUIRE(run("compute --label q3 --n 2 --weights 1..2 --format machine --out " +
              ref.string()) == 0);
  std::string out;
  CHECK(run("verify --label q3 --n 2 --weights 1..2 --against " + ref.string(),
            &out) == 0);
  CHECK(out.find("all checks passed") != std::string::npos);
  // A mutated machine file is flagged.
  json doc = json::parse(slurp(ref));
  doc["entries"][0]["p_exponents"] = {7};
  std::ofstream(ref) << doc.dump(2) << "\n";
  CHECK(run("verify --label q3 --n 2 --weights 1..2 --against " + ref.string(),
            &out) != 0);
  CHECK(out.find("FAIL") != std::string::npos);
}

TEST_CASE("verify against the bundled reference data") {
  std::string data = SYNK_DATA_DIR;
  std::string out;
  CHECK(run("verify --label q3 --n 2 --weights 1..3 --reference " + data +
            "/k_z9.json", &out) == 0);
  CHECK(out.find("ok   K_5") != std::string::npos);
  // Unknown (label, n) pairs are an error, not a silent pass.
  CHECK(run("verify --label q3 --n 5 --weights 1..1 --reference " + data +
            "/k_z9.json", &out) != 0);
}

TEST_CASE("fault injection: one mutated reference entry -> one mismatch") {
  json doc = json::parse(slurp(fs::path(SYNK_DATA_DIR) / "k_z9.json"));
  doc["tables"][0]["groups"]["3"] = {9};  // K_3(Z/9) is really (Z/3)^2
  fs::path bad = fs::temp_directory_path() / "synk_bad_ref.json";
  std::ofstream(bad) << doc.dump(1) << "\n";
  std::string out;
  CHECK(run("verify --label q3 --n 2 --weights 1..3 --reference " + bad.string(),
            &out) != 0);
  int fails = 0;
  for (size_t pos = 0; (pos = out.find("FAIL K_", pos)) != std::string::npos; ++pos)
    ++fails;
  CHECK(fails == 1);
}

TEST_CASE("reference comparison with disjoint ranges warns, compares nothing") {
  FieldSpec q3 = spec_from_label("q3");
  KGroupTable t = compute_k_table(q3, 2, 1, 2);
  ReferenceTable ref;
  ref.label = "q3";
  ref.n = 2;
  ref.groups[40] = {1};  // no overlap with degrees 1..3
  VerifyReport rep = compare_to_reference(t, ref);
  CHECK(rep.compared == 0);
  CHECK(rep.mismatches == 0);
  CHECK(rep.text.find("warning") != std::string::npos);
}

TEST_CASE("cache: roundtrip, transparency, corruption recovery, gc") {
  fs::path dir = fs::temp_directory_path() / "synk_cache_test";
  fs::remove_all(dir);
  ResultCache cache(dir.string());
  CacheKey key{spec_from_label("q2"), 2, 2};
  CHECK_FALSE(cache.load(key).has_value());
  CachedCohomology val;
  val.h1 = {2, {3}};
  val.h2 = {2, {1}};
  val.certified = true;
  val.precision_used = 52;
  val.guard = 7;
  val.b = 3;
  cache.store(key, val);
  auto back = cache.load(key);
  REQUIRE(back.has_value());
  CHECK(back->h1 == val.h1);
  CHECK(back->h2 == val.h2);
  CHECK(back->precision_used == 52);
  CHECK(back->b == 3);

  // Different key, same digest namespace: no crosstalk.
  CacheKey other{spec_from_label("q2"), 2, 3};
  CHECK(ResultCache::key_digest(other) != ResultCache::key_digest(key));
  CHECK_FALSE(cache.load(other).has_value());

  // Cached and uncached computations agree.
  FieldSpec q2 = spec_from_label("q2");
  ComputeOptions with, without;
  with.cache_dir = dir.string();
  KGroupTable tc = compute_k_table(q2, 2, 1, 3, with);   // fills the cache
  KGroupTable tc2 = compute_k_table(q2, 2, 1, 3, with);  // serves from it
  KGroupTable tp = compute_k_table(q2, 2, 1, 3, without);
  REQUIRE(tc.entries.size() == tp.entries.size());
  for (size_t k = 0; k < tp.entries.size(); ++k) {
    CHECK(tc.entries[k].group == tp.entries[k].group);
    CHECK(tc2.entries[k].group == tp.entries[k].group);
    CHECK(tc2.entries[k].from_cache);
  }

  // Truncate every cache file: loads become misses, gc sweeps them out.
  int files = 0;
  for (const auto& ent : fs::directory_iterator(dir)) {
    std::ofstream(ent.path(), std::ios::trunc) << "{ corrupt";
    ++files;
  }
  REQUIRE(files > 0);
  CHECK_FALSE(cache.load(key).has_value());
  auto stats = cache.gc();
  CHECK(stats.removed == files);
  CHECK(stats.kept == 0);
  // And computation still succeeds, repopulating the cache.
  KGroupTable tr = compute_k_table(q2, 2, 2, 2, with);
  CHECK(tr.entries.back().group == tp.entries[2].group);
  fs::remove_all(dir);
}

TEST_CASE("cache-gc subcommand") {
  fs::path dir = fs::temp_directory_path() / "synk_gc_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "junk.json") << "not json";
  std::string out;
  CHECK(run("cache-gc --cache-dir " + dir.string(), &out) == 0);
  CHECK(out.find("removed 1") != std::string::npos);
  fs::remove_all(dir);
}
