#pragma once

#include <set>
#include <string>
#include <string_view>

namespace latlab {

// Every fixed surface word used by any rendering template, prompt, or trace
// anywhere in the project. The synthetic identifier generator refuses to emit
// these, so a generated identifier can never collide with template text (which
// would confuse parsing, scoring, and the leakage scanners). A forge unit test
// asserts the template vocabulary stays inside this list.
inline const std::set<std::string>& reserved_surface_words() {
  static const std::set<std::string> words = {
      // shared scaffolding
      "about", "the", "realm", "notes", "from", "records", "of", "question", "answer",
      "task", "list", "that", "every", "which", "does", "do", "have", "has", "is", "a",
      "it", "to", "by", "in", "for", "so", "yes", "no", "not", "i", "know", "what",
      "with", "any", "give", "say", "state", "how",
      // taxonomy fact templates
      "kind", "kinds", "belongs", "counted", "among", "group", "family", "contains",
      "includes", "include", "trait", "marked", "shows", "able", "can", "perform",
      "knows", "tied", "linked", "stands", "categories", "properties", "category",
      "property",
      // trace scaffolding
      "candidates", "match", "mentions", "description", "described", "check", "then",
      // biography corpus
      "profiles", "noted", "figures", "figure", "people", "describe", "earned", "fame",
      "remembered", "known", "as", "one", "who", "mastered", "crafting", "famed",
      "work", "around", "master", "craft", "near", "artisan", "across", "goes", "name",
      "named", "person", "called", "behind", "recall", "mention",
      // instruction-following side tasks (deliberately outside both synthetic
      // alphabets: each word mixes consonants the generators keep separate)
      "repeat", "after", "me", "first", "last", "word", "alpha", "beta", "gamma",
      "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa", "lambda", "mu",
  };
  return words;
}

inline bool is_reserved_surface_word(std::string_view w) {
  return reserved_surface_words().count(std::string(w)) > 0;
}

}  // namespace latlab
