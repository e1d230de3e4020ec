#include <algorithm>
#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "latlab/core/errors.hpp"
#include "latlab/core/rng.hpp"
#include "latlab/eval/metrics.hpp"
#include "latlab/forge/types.hpp"
#include "oracles.hpp"

using namespace latlab;
using namespace latlab::eval;
using latlab::forge::QAItem;
namespace fs = std::filesystem;

namespace {
QAItem make_item(std::vector<std::string> a_all, std::vector<std::string> a_heldout,
                 std::string primary) {
  QAItem q;
  q.qa_id = "q0";
  q.prompt = "?";
  std::sort(a_all.begin(), a_all.end());
  std::sort(a_heldout.begin(), a_heldout.end());
  q.a_all = std::move(a_all);
  q.a_heldout = std::move(a_heldout);
  q.primary_reference = std::move(primary);
  q.condition = forge::condition::direct;
  return q;
}
}  // namespace

// ---- score_set -------------------------------------------------------------

TEST_CASE("perfect prediction scores 1 everywhere") {
  QAItem q = make_item({"a", "b", "c"}, {"c"}, "a");
  SetScore s = score_set({"a", "b", "c"}, q);
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(s.f1 == 1.0);
  CHECK(s.exact_set);
  CHECK(s.primary_included);
  REQUIRE(s.train_recall.has_value());
  CHECK(*s.train_recall == 1.0);
  REQUIRE(s.heldout_recall.has_value());
  CHECK(*s.heldout_recall == 1.0);
}

TEST_CASE("half-overlapping prediction gets the definitional arithmetic") {
  QAItem q = make_item({"a", "c"}, {"c"}, "a");
  SetScore s = score_set({"a", "b"}, q);
  CHECK(s.precision == doctest::Approx(0.5));
  CHECK(s.recall == doctest::Approx(0.5));
  CHECK(s.f1 == doctest::Approx(0.5));
  CHECK(!s.exact_set);
  CHECK(s.primary_included);
  CHECK(*s.train_recall == 1.0);
  CHECK(*s.heldout_recall == 0.0);
}

TEST_CASE("strict superset prediction: full recall, imperfect precision") {
  QAItem q = make_item({"a", "b"}, {}, "b");
  SetScore s = score_set({"a", "b", "zz"}, q);
  CHECK(s.recall == 1.0);
  CHECK(s.precision < 1.0);
  CHECK(!s.exact_set);
  CHECK(!s.heldout_recall.has_value());
  CHECK(*s.train_recall == 1.0);
}

TEST_CASE("scoring is invariant to order, duplicates, case, and punctuation") {
  QAItem q = make_item({"warm blooded", "dog"}, {"dog"}, "dog");
  SetScore a = score_set({"Dog.", "  WARM   blooded!", "dog"}, q);
  SetScore b = score_set({"warm blooded", "dog"}, q);
  CHECK(a.precision == b.precision);
  CHECK(a.recall == b.recall);
  CHECK(a.f1 == b.f1);
  CHECK(a.exact_set);
  CHECK(a.exact_set == b.exact_set);
}

TEST_CASE("empty prediction and empty reference sets") {
  QAItem q = make_item({"a"}, {"a"}, "a");
  SetScore s = score_set({}, q);
  CHECK(s.precision == 0.0);
  CHECK(s.recall == 0.0);
  CHECK(s.f1 == 0.0);
  CHECK(!s.exact_set);
  CHECK(!s.train_recall.has_value());  // every answer is held out
  CHECK(*s.heldout_recall == 0.0);

  QAItem bad = make_item({}, {}, "");
  bad.a_all.clear();
  CHECK_THROWS_AS(score_set({"a"}, bad), DataError);
}

TEST_CASE("qa item validation rejects malformed sets") {
  QAItem q = make_item({"a", "b"}, {"b"}, "a");
  CHECK_NOTHROW(q.validate());
  QAItem unsorted = q;
  std::swap(unsorted.a_all[0], unsorted.a_all[1]);
  CHECK_THROWS_AS(unsorted.validate(), DataError);
  QAItem stray = q;
  stray.a_heldout = {"zz"};
  CHECK_THROWS_AS(stray.validate(), DataError);
  QAItem primary = q;
  primary.primary_reference = "zz";
  CHECK_THROWS_AS(primary.validate(), DataError);
  QAItem denorm = q;
  denorm.a_all = {"A!", "b"};
  CHECK_THROWS_AS(denorm.validate(), DataError);
}

// ---- pass@n ------------------------------------------------------------------

TEST_CASE("pass_at_n frozen examples") {
  CHECK(pass_at_n(1, 4, 1) == doctest::Approx(0.25));
  CHECK(pass_at_n(0, 7, 3) == 0.0);
  CHECK(pass_at_n(2, 16, 16) == 1.0);
  CHECK(pass_at_n(16, 16, 1) == 1.0);
  CHECK(pass_at_n(3, 10, 2) == doctest::Approx(1.0 - (7.0 * 6.0) / (10.0 * 9.0)));
  CHECK_THROWS_AS(pass_at_n(5, 4, 1), DataError);
  CHECK_THROWS_AS(pass_at_n(-1, 4, 1), DataError);
  CHECK_THROWS_AS(pass_at_n(1, 4, 5), DataError);
  CHECK_THROWS_AS(pass_at_n(1, 4, 0), DataError);
}

TEST_CASE("pass_at_n with n = k is the any-success indicator") {
  for (int k : {1, 3, 16})
    for (int c = 0; c <= k; ++c) CHECK(pass_at_n(c, k, k) == (c > 0 ? 1.0 : 0.0));
}

TEST_CASE("pass_at_n matches Monte-Carlo resampling within 0.01") {
  Rng rng = derive_rng(2024, "mc-pass");
  for (auto [c, k, n] : std::vector<std::array<int, 3>>{
           {1, 16, 4}, {3, 16, 8}, {5, 12, 2}, {2, 7, 3}, {7, 9, 5}}) {
    double mc = oracle::mc_pass_at_n(c, k, n, 100000, rng);
    CHECK(pass_at_n(c, k, n) == doctest::Approx(mc).epsilon(0.015));
  }
}

// ---- best@n ------------------------------------------------------------------

TEST_CASE("best_at_n endpoints: mean at 1, max at k") {
  std::vector<double> s{0.2, 0.8, 0.5, 0.0};
  CHECK(best_at_n(s, 1) == doctest::Approx(0.375));
  CHECK(best_at_n(s, 4) == doctest::Approx(0.8));
  CHECK_THROWS_AS(best_at_n(s, 0), DataError);
  CHECK_THROWS_AS(best_at_n(s, 5), DataError);
  CHECK_THROWS_AS(best_at_n({}, 1), DataError);
}

TEST_CASE("best_at_n matches Monte-Carlo resampling within 0.01") {
  Rng rng = derive_rng(2025, "mc-best");
  std::vector<double> scores;
  Rng gen = derive_rng(7, "scores");
  for (int i = 0; i < 16; ++i) scores.push_back(gen.uniform());
  for (int n : {2, 4, 8, 15}) {
    double mc = oracle::mc_best_at_n(scores, n, 100000, rng);
    CHECK(best_at_n(scores, n) == doctest::Approx(mc).epsilon(0.01));
  }
}

// ---- forge record files --------------------------------------------------------

TEST_CASE("qa and document record files round-trip") {
  auto dir = fs::temp_directory_path() / "latlab_eval_test_rt";
  fs::create_directories(dir);

  forge::QAItem q = make_item({"bela", "gopu"}, {"gopu"}, "bela");
  q.qa_id = "qa-1";
  q.prompt = "from the records of x. question: list every kind.";
  q.condition = "strict_reversal";
  forge::save_qa({q}, dir / "qa.rec");
  auto items = forge::load_qa(dir / "qa.rec");
  REQUIRE(items.size() == 1);
  CHECK(items[0].qa_id == q.qa_id);
  CHECK(items[0].prompt == q.prompt);
  CHECK(items[0].a_all == q.a_all);
  CHECK(items[0].a_heldout == q.a_heldout);
  CHECK(items[0].primary_reference == q.primary_reference);
  CHECK(items[0].condition == q.condition);

  forge::Document d;
  d.doc_id = "doc-1";
  d.task_prefix = "notes about the realm";
  d.body = "every bela is a kind of gopu .";
  d.source_fact_keys = {"bela\x1fis_a\x1fgopu"};
  forge::save_documents({d}, dir / "docs.rec");
  auto docs = forge::load_documents(dir / "docs.rec");
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].doc_id == d.doc_id);
  CHECK(docs[0].body == d.body);
  CHECK(docs[0].source_fact_keys == d.source_fact_keys);

  forge::SplitManifest m;
  m.split = forge::Split::rl_train;
  m.item_ids = {"qa-1", "qa-2"};
  m.content_hash = forge::manifest_hash(m.split, m.item_ids);
  forge::save_manifest(m, dir / "m.rec");
  auto back = forge::load_manifest(dir / "m.rec");
  CHECK(back.split == m.split);
  CHECK(back.item_ids == m.item_ids);
  CHECK(back.content_hash == m.content_hash);

  // Tampering with the id list breaks the stored hash.
  m.item_ids.push_back("qa-3");
  forge::save_manifest(m, dir / "bad.rec");
  CHECK_THROWS_AS(forge::load_manifest(dir / "bad.rec"), DataError);
}

TEST_CASE("loading a qa file with non-canonical answers fails") {
  auto dir = fs::temp_directory_path() / "latlab_eval_test_bad";
  fs::create_directories(dir);
  forge::QAItem q = make_item({"a"}, {}, "a");
  q.a_all = {"Not Normalized!"};
  q.primary_reference = "Not Normalized!";
  forge::save_qa({q}, dir / "qa.rec");
  CHECK_THROWS_AS(forge::load_qa(dir / "qa.rec"), DataError);
}
