#include "core/porter.hpp"

#include <cctype>

#include "core/text.hpp"

// Straight port of the published algorithm: a word is [C](VC)^m[V], rules are
// tried longest-suffix-first within a step, and a rule's condition is tested
// on the stem left after removing the suffix.

namespace fragmap {
namespace {

struct Stemmer {
  std::string w;

  bool is_vowel(size_t i) const {
    char c = w[i];
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return true;
    // y counts as a vowel when it follows a consonant.
    if (c == 'y' && i > 0) return !is_vowel(i - 1);
    return false;
  }

  // Measure of w[0..end): the m in [C](VC)^m[V].
  int measure(size_t end) const {
    int m = 0;
    size_t i = 0;
    while (i < end && !is_vowel(i)) ++i;  // leading consonants
    while (i < end) {
      while (i < end && is_vowel(i)) ++i;
      if (i >= end) break;
      while (i < end && !is_vowel(i)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(size_t end) const {
    for (size_t i = 0; i < end; ++i)
      if (is_vowel(i)) return true;
    return false;
  }

  bool double_consonant_at_end(size_t end) const {
    if (end < 2) return false;
    if (w[end - 1] != w[end - 2]) return false;
    return !is_vowel(end - 1);
  }

  // *o: stem ends consonant-vowel-consonant where the final consonant is not
  // w, x or y.
  bool cvc_at_end(size_t end) const {
    if (end < 3) return false;
    if (is_vowel(end - 1) || !is_vowel(end - 2) || is_vowel(end - 3)) return false;
    char c = w[end - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(const char* suffix) const {
    size_t n = 0;
    while (suffix[n]) ++n;
    if (n > w.size()) return false;
    return w.compare(w.size() - n, n, suffix) == 0;
  }

  size_t stem_len(const char* suffix) const {
    size_t n = 0;
    while (suffix[n]) ++n;
    return w.size() - n;
  }

  void set_to(size_t stem, const char* replacement) {
    w.erase(stem);
    w += replacement;
  }

  // Replace suffix when the measure condition on the stem holds; reports
  // whether the suffix matched at all (rule tried), not whether it fired.
  bool rule(const char* suffix, const char* replacement, int min_m) {
    if (!ends(suffix)) return false;
    size_t stem = stem_len(suffix);
    if (measure(stem) > min_m - 1) set_to(stem, replacement);
    return true;
  }

  void step1a() {
    if (ends("sses")) {
      set_to(stem_len("sses"), "ss");
    } else if (ends("ies")) {
      set_to(stem_len("ies"), "i");
    } else if (ends("ss")) {
      // keep
    } else if (ends("s")) {
      set_to(stem_len("s"), "");
    }
  }

  void step1b() {
    if (ends("eed")) {
      size_t stem = stem_len("eed");
      if (measure(stem) > 0) set_to(stem, "ee");
      return;
    }
    bool stripped = false;
    if (ends("ed") && has_vowel(stem_len("ed"))) {
      set_to(stem_len("ed"), "");
      stripped = true;
    } else if (ends("ing") && has_vowel(stem_len("ing"))) {
      set_to(stem_len("ing"), "");
      stripped = true;
    }
    if (!stripped) return;
    if (ends("at") || ends("bl") || ends("iz")) {
      w += 'e';
    } else if (double_consonant_at_end(w.size())) {
      char c = w.back();
      if (c != 'l' && c != 's' && c != 'z') w.pop_back();
    } else if (measure(w.size()) == 1 && cvc_at_end(w.size())) {
      w += 'e';
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(stem_len("y"))) w.back() = 'i';
  }

  void step2() {
    static const struct { const char* from; const char* to; } rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
        {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
        {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
        {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
        {"iviti", "ive"},   {"biliti", "ble"},
    };
    for (const auto& r : rules)
      if (rule(r.from, r.to, 1)) return;
  }

  void step3() {
    static const struct { const char* from; const char* to; } rules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    for (const auto& r : rules)
      if (rule(r.from, r.to, 1)) return;
  }

  void step4() {
    static const char* suffixes[] = {
        "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent",
        "ism",   "ate",  "iti",  "ous",  "ive",  "ize",  "ion", "al",
        "er",    "ic",   "ou",
    };
    for (const char* s : suffixes) {
      if (!ends(s)) continue;
      size_t stem = stem_len(s);
      if (std::string(s) == "ion") {
        // (m>1 and (*S or *T)) ION ->
        if (stem > 0 && (w[stem - 1] == 's' || w[stem - 1] == 't') &&
            measure(stem) > 1)
          set_to(stem, "");
        return;
      }
      if (measure(stem) > 1) set_to(stem, "");
      return;
    }
  }

  void step5a() {
    if (!ends("e")) return;
    size_t stem = stem_len("e");
    int m = measure(stem);
    if (m > 1 || (m == 1 && !cvc_at_end(stem))) set_to(stem, "");
  }

  void step5b() {
    if (w.size() >= 2 && w.back() == 'l' && double_consonant_at_end(w.size()) &&
        measure(w.size()) > 1)
      w.pop_back();
  }
};

}  // namespace

std::string porter_stem(const std::string& token) {
  std::string s = to_lower(token);
  for (unsigned char c : s)
    if (c < 'a' || c > 'z') return s;  // pass non-alphabetic tokens through
  if (s.size() <= 2) return s;

  Stemmer st{s};
  st.step1a();
  st.step1b();
  st.step1c();
  st.step2();
  st.step3();
  st.step4();
  st.step5a();
  st.step5b();
  return st.w;
}

}  // namespace fragmap
