#include "latlab/forge/types.hpp"

#include <algorithm>

#include "latlab/core/hashing.hpp"
#include "latlab/core/records.hpp"
#include "latlab/core/text.hpp"

namespace latlab::forge {

namespace {
constexpr const char* kDocSchema = "latlab.docs/1";
constexpr const char* kQaSchema = "latlab.qa/1";
constexpr const char* kManifestSchema = "latlab.manifest/1";
constexpr char kListSep = '\x1e';

std::string join_list(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += kListSep;
    out += v[i];
  }
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  if (s.empty()) return {};
  return split_on(s, kListSep);
}

bool sorted_unique_normalized(const std::vector<std::string>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != normalize_answer(v[i]) || v[i].empty()) return false;
    if (i && !(v[i - 1] < v[i])) return false;
  }
  return true;
}
}  // namespace

bool QAItem::answer_valid(const std::string& normalized) const {
  return std::binary_search(a_all.begin(), a_all.end(), normalized);
}

bool QAItem::answer_heldout(const std::string& normalized) const {
  return std::binary_search(a_heldout.begin(), a_heldout.end(), normalized);
}

void QAItem::validate() const {
  if (a_all.empty()) throw DataError("qa item " + qa_id + ": empty answer set");
  if (!sorted_unique_normalized(a_all))
    throw DataError("qa item " + qa_id + ": a_all not canonical");
  if (!sorted_unique_normalized(a_heldout))
    throw DataError("qa item " + qa_id + ": a_heldout not canonical");
  for (const auto& a : a_heldout)
    if (!answer_valid(a))
      throw DataError("qa item " + qa_id + ": held-out answer not in a_all: " + a);
  if (!answer_valid(primary_reference))
    throw DataError("qa item " + qa_id + ": primary reference not in a_all");
}

std::string to_string(Split s) {
  switch (s) {
    case Split::knowledge_acquisition: return "knowledge_acquisition";
    case Split::bootstrap: return "bootstrap";
    case Split::rl_train: return "rl_train";
    case Split::test_in_dist: return "test_in_dist";
    case Split::test_out_dist: return "test_out_dist";
  }
  throw Error("bad Split");
}

Split split_from_string(const std::string& s) {
  if (s == "knowledge_acquisition") return Split::knowledge_acquisition;
  if (s == "bootstrap") return Split::bootstrap;
  if (s == "rl_train") return Split::rl_train;
  if (s == "test_in_dist") return Split::test_in_dist;
  if (s == "test_out_dist") return Split::test_out_dist;
  throw DataError("unknown split: " + s);
}

std::string manifest_hash(Split split, const std::vector<std::string>& item_ids) {
  StreamHash h;
  h.update(to_string(split)).update("\x1f");
  for (const auto& id : item_ids) h.update(id).update("\x1e");
  return hash_hex(h.value());
}

void save_documents(const std::vector<Document>& docs, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(docs.size());
  for (const auto& d : docs)
    rows.push_back({d.doc_id, d.task_prefix, d.body, join_list(d.source_fact_keys),
                    tax::to_string(d.tag)});
  write_records(path, kDocSchema, rows);
}

std::vector<Document> load_documents(const std::filesystem::path& path) {
  std::vector<Document> docs;
  for (const auto& row : read_records(path, kDocSchema).rows) {
    Document d;
    d.doc_id = row.at(0);
    d.task_prefix = row.at(1);
    d.body = row.at(2);
    d.source_fact_keys = split_list(row.at(3));
    d.tag = tax::distribution_tag_from_string(row.at(4));
    docs.push_back(std::move(d));
  }
  return docs;
}

void save_qa(const std::vector<QAItem>& items, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(items.size());
  for (const auto& q : items)
    rows.push_back({q.qa_id, q.prompt, join_list(q.a_all), join_list(q.a_heldout),
                    q.primary_reference, q.condition, tax::to_string(q.tag)});
  write_records(path, kQaSchema, rows);
}

std::vector<QAItem> load_qa(const std::filesystem::path& path) {
  std::vector<QAItem> items;
  for (const auto& row : read_records(path, kQaSchema).rows) {
    QAItem q;
    q.qa_id = row.at(0);
    q.prompt = row.at(1);
    q.a_all = split_list(row.at(2));
    q.a_heldout = split_list(row.at(3));
    q.primary_reference = row.at(4);
    q.condition = row.at(5);
    q.tag = tax::distribution_tag_from_string(row.at(6));
    q.validate();
    items.push_back(std::move(q));
  }
  return items;
}

void save_manifest(const SplitManifest& m, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({to_string(m.split), m.content_hash});
  for (const auto& id : m.item_ids) rows.push_back({"item", id});
  write_records(path, kManifestSchema, rows);
}

SplitManifest load_manifest(const std::filesystem::path& path) {
  const auto rec = read_records(path, kManifestSchema);
  if (rec.rows.empty()) throw DataError(path.string() + ": empty manifest");
  SplitManifest m;
  m.split = split_from_string(rec.rows[0].at(0));
  m.content_hash = rec.rows[0].at(1);
  for (std::size_t i = 1; i < rec.rows.size(); ++i) {
    if (rec.rows[i].at(0) != "item") throw DataError(path.string() + ": bad manifest row");
    m.item_ids.push_back(rec.rows[i].at(1));
  }
  if (m.content_hash != manifest_hash(m.split, m.item_ids))
    throw DataError(path.string() + ": manifest hash mismatch");
  return m;
}

}  // namespace latlab::forge
