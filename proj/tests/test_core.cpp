#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "latlab/core/errors.hpp"
#include "latlab/core/hashing.hpp"
#include "latlab/core/kv_config.hpp"
#include "latlab/core/records.hpp"
#include "latlab/core/rng.hpp"
#include "latlab/core/text.hpp"

using namespace latlab;
namespace fs = std::filesystem;

namespace {
fs::path temp_dir() {
  static int n = 0;
  fs::path p = fs::temp_directory_path() / ("latlab_core_test_" + std::to_string(n++));
  fs::create_directories(p);
  return p;
}
}  // namespace

// ---- rng ------------------------------------------------------------------

TEST_CASE("derived rng streams are reproducible and distinct") {
  Rng a = derive_rng(42, "stream-a");
  Rng a2 = derive_rng(42, "stream-a");
  Rng b = derive_rng(42, "stream-b");
  Rng c = derive_rng(43, "stream-a");
  std::vector<std::uint64_t> va, va2, vb, vc;
  for (int i = 0; i < 16; ++i) {
    va.push_back(a.u64());
    va2.push_back(a2.u64());
    vb.push_back(b.u64());
    vc.push_back(c.u64());
  }
  CHECK(va == va2);
  CHECK(va != vb);
  CHECK(va != vc);
  CHECK(mix_seed(7, "x", 0) != mix_seed(7, "x", 1));
}

TEST_CASE("uniform_int stays inside inclusive bounds and hits them") {
  Rng r(123);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    auto v = r.uniform_int(-3, 4);
    REQUIRE(v >= -3);
    REQUIRE(v <= 4);
    seen.insert(v);
  }
  CHECK(seen.size() == 8);
  CHECK(r.uniform_int(5, 5) == 5);
  CHECK_THROWS_AS(r.uniform_int(2, 1), Error);
}

TEST_CASE("uniform is in [0,1) and roughly centered") {
  Rng r(99);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 20000.0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("normal has near-zero mean and unit variance") {
  Rng r(7);
  double sum = 0.0, sq = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    double x = r.normal();
    sum += x;
    sq += x * x;
  }
  double mean = sum / n;
  CHECK(mean == doctest::Approx(0.0).epsilon(0.02));
  CHECK(sq / n - mean * mean == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("sample_without_replacement returns k distinct indices below n") {
  Rng r(5);
  auto got = r.sample_without_replacement(10, 4);
  CHECK(got.size() == 4);
  std::set<std::size_t> s(got.begin(), got.end());
  CHECK(s.size() == 4);
  for (auto i : got) CHECK(i < 10);
  CHECK_THROWS_AS(r.sample_without_replacement(3, 4), Error);
}

TEST_CASE("categorical respects weights") {
  Rng r(11);
  int hits = 0;
  for (int i = 0; i < 10000; ++i)
    if (r.categorical({1.0, 0.0, 3.0}) == 2) ++hits;
  CHECK(hits / 10000.0 == doctest::Approx(0.75).epsilon(0.03));
  CHECK_THROWS_AS(r.categorical({0.0, 0.0}), Error);
}

TEST_CASE("shuffle permutes without losing elements") {
  Rng r(3);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7};
  auto orig = v;
  r.shuffle(v);
  std::multiset<int> a(v.begin(), v.end()), b(orig.begin(), orig.end());
  CHECK(a == b);
}

// ---- text -----------------------------------------------------------------

TEST_CASE("split and join round-trip") {
  CHECK(split_ws("  a  bb\tccc \n") == std::vector<std::string>{"a", "bb", "ccc"});
  CHECK(split_ws("") == std::vector<std::string>{});
  CHECK(split_on("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(join({"x", "y", "z"}, ", ") == "x, y, z");
  CHECK(join({}, ",") == "");
}

TEST_CASE("normalize_answer folds case, punctuation, and spacing") {
  CHECK(normalize_answer("  The Dog.  ") == "the dog");
  CHECK(normalize_answer("WARM-blooded!") == "warmblooded");
  CHECK(normalize_answer("a   b\tc") == "a b c");
  CHECK(normalize_answer("") == "");
  CHECK(normalize_answer("...") == "");
}

TEST_CASE("trim and predicates") {
  CHECK(trim(" \t x y \n") == "x y");
  CHECK(starts_with("abcdef", "abc"));
  CHECK(!starts_with("ab", "abc"));
  CHECK(contains("hello world", "lo wo"));
  CHECK(!contains("hello", "z"));
}

// ---- records --------------------------------------------------------------

TEST_CASE("record files round-trip fields with tabs, newlines, backslashes") {
  auto dir = temp_dir();
  auto path = dir / "rows.rec";
  std::vector<std::vector<std::string>> rows = {
      {"plain", "two words"},
      {"tab\there", "line\nbreak", "back\\slash"},
      {"", "empty first"},
  };
  write_records(path, "test.rows/1", rows);
  auto back = read_records(path, "test.rows/1");
  CHECK(back.schema == "test.rows/1");
  CHECK(back.rows == rows);
}

TEST_CASE("record reader rejects wrong or missing schema") {
  auto dir = temp_dir();
  auto path = dir / "rows.rec";
  write_records(path, "test.rows/1", {{"a"}});
  CHECK_THROWS_AS(read_records(path, "test.rows/2"), DataError);
  write_text_file(path, "no header line\n");
  CHECK_THROWS_AS(read_records(path, "test.rows/1"), DataError);
  CHECK_THROWS_AS(read_records(dir / "absent.rec", "x"), DataError);
}

TEST_CASE("escape_field survives adversarial strings") {
  for (std::string s : {"", "\\", "\\\\", "\t", "\n", "\r", "a\\tb", "\\n", "x\x1f y"})
    CHECK(unescape_field(escape_field(s)) == s);
}

// ---- kv_config --------------------------------------------------------------

TEST_CASE("kv config parses, overrides, and serializes sorted") {
  KvConfig c = KvConfig::parse("# comment\nb = 2\na= hello world \n\nc.d=0.5\n");
  CHECK(c.get_int("b") == 2);
  CHECK(c.get_str("a") == "hello world");
  CHECK(c.get_double("c.d") == doctest::Approx(0.5));
  c.apply_override("b=3");
  CHECK(c.get_int("b") == 3);
  CHECK_THROWS_AS(c.apply_override("not an assignment"), ConfigError);
  std::string text = c.to_string();
  CHECK(text.find("a = hello world") < text.find("b = 3"));
  KvConfig back = KvConfig::parse(text);
  CHECK(back.values() == c.values());
}

TEST_CASE("kv getters throw on missing keys and bad types") {
  KvConfig c = KvConfig::parse("n = 5\ns = oops\n");
  CHECK_THROWS_AS(c.get_int("absent"), ConfigError);
  CHECK_THROWS_AS(c.get_int("s"), ConfigError);
  CHECK_THROWS_AS(c.get_double("s"), ConfigError);
  CHECK(c.get_int("absent", 9) == 9);
  CHECK(c.get_str("absent", "d") == "d");
  KvConfig b = KvConfig::parse("t = yes\nf = 0\n");
  CHECK(b.get_bool("t", false));
  CHECK(!b.get_bool("f", true));
  CHECK(b.get_bool("absent", true));
}

TEST_CASE("kv merge and content hash") {
  KvConfig a = KvConfig::parse("x = 1\ny = 2\n");
  KvConfig b = KvConfig::parse("y = 3\nz = 4\n");
  a.merge(b);
  CHECK(a.get_int("y") == 3);
  CHECK(a.get_int("z") == 4);
  KvConfig c = KvConfig::parse("x = 1\ny = 3\nz = 4\n");
  CHECK(a.content_hash() == c.content_hash());
  c.set_int("x", 2);
  CHECK(a.content_hash() != c.content_hash());
}

TEST_CASE("kv config file round-trip") {
  auto dir = temp_dir();
  KvConfig c;
  c.set("name", "value with spaces");
  c.set_double("lr", 0.0003);
  c.save(dir / "conf.kv");
  KvConfig back = KvConfig::load(dir / "conf.kv");
  CHECK(back.get_str("name") == "value with spaces");
  CHECK(back.get_double("lr") == doctest::Approx(0.0003));
  CHECK_THROWS_AS(KvConfig::load(dir / "missing.kv"), ConfigError);
}

// ---- hashing ----------------------------------------------------------------

TEST_CASE("stream hash matches one-shot fnv over concatenation") {
  StreamHash h;
  h.update("hello ").update("world");
  CHECK(h.value() == fnv1a64("hello world"));
  CHECK(hash_hex(h.value()).size() == 16);
}

TEST_CASE("file hash reflects content changes") {
  auto dir = temp_dir();
  write_text_file(dir / "f.txt", "abc");
  write_text_file(dir / "g.txt", "abc");
  write_text_file(dir / "h.txt", "abd");
  CHECK(hash_file(dir / "f.txt") == hash_file(dir / "g.txt"));
  CHECK(hash_file(dir / "f.txt") != hash_file(dir / "h.txt"));
  CHECK(hash_file(dir / "f.txt") == fnv1a64("abc"));
}
