#include "ellda/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace ellda {

std::string to_lower(const std::string& s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Porter stemmer (Porter 1980). Operates on a lowercase ASCII word.
// ---------------------------------------------------------------------------

bool is_consonant(const std::string& w, int i) {
  char c = w[i];
  if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
  if (c == 'y') return i == 0 ? true : !is_consonant(w, i - 1);
  return true;
}

// m(): number of VC sequences in w[0..end].
int measure(const std::string& w, int end) {
  int n = 0;
  int i = 0;
  while (true) {
    if (i > end) return n;
    if (!is_consonant(w, i)) break;
    ++i;
  }
  ++i;
  while (true) {
    while (true) {
      if (i > end) return n;
      if (is_consonant(w, i)) break;
      ++i;
    }
    ++i;
    ++n;
    while (true) {
      if (i > end) return n;
      if (!is_consonant(w, i)) break;
      ++i;
    }
    ++i;
  }
}

bool has_vowel(const std::string& w, int end) {
  for (int i = 0; i <= end; ++i)
    if (!is_consonant(w, i)) return true;
  return false;
}

bool double_consonant(const std::string& w, int end) {
  if (end < 1) return false;
  if (w[end] != w[end - 1]) return false;
  return is_consonant(w, end);
}

// cvc at the end, where the final c is not w, x or y.
bool ends_cvc(const std::string& w, int end) {
  if (end < 2) return false;
  if (!is_consonant(w, end) || is_consonant(w, end - 1) ||
      !is_consonant(w, end - 2))
    return false;
  char c = w[end];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, const char* suf) {
  size_t n = std::char_traits<char>::length(suf);
  if (w.size() < n) return false;
  return w.compare(w.size() - n, n, suf) == 0;
}

// Stem length (index of last char) with `suf` removed.
int stem_end(const std::string& w, const char* suf) {
  return static_cast<int>(w.size() - std::char_traits<char>::length(suf)) - 1;
}

// If the word ends with `suf` and measure(stem) > m_min, replace suffix.
bool replace_if(std::string& w, const char* suf, const char* rep, int m_min) {
  if (!ends_with(w, suf)) return false;
  int e = stem_end(w, suf);
  if (measure(w, e) > m_min) {
    w.resize(e + 1);
    w += rep;
  }
  return true;
}

void step1ab(std::string& w) {
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (!ends_with(w, "ss") && ends_with(w, "s")) {
    w.resize(w.size() - 1);
  }

  bool cleanup = false;
  if (ends_with(w, "eed")) {
    if (measure(w, stem_end(w, "eed")) > 0) w.resize(w.size() - 1);
  } else if (ends_with(w, "ed") && has_vowel(w, stem_end(w, "ed"))) {
    w.resize(w.size() - 2);
    cleanup = true;
  } else if (ends_with(w, "ing") && has_vowel(w, stem_end(w, "ing"))) {
    w.resize(w.size() - 3);
    cleanup = true;
  }

  if (cleanup) {
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
      w += 'e';
    } else if (double_consonant(w, static_cast<int>(w.size()) - 1)) {
      char c = w.back();
      if (c != 'l' && c != 's' && c != 'z') w.resize(w.size() - 1);
    } else if (measure(w, static_cast<int>(w.size()) - 1) == 1 &&
               ends_cvc(w, static_cast<int>(w.size()) - 1)) {
      w += 'e';
    }
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") && has_vowel(w, static_cast<int>(w.size()) - 2))
    w.back() = 'i';
}

void step2(std::string& w) {
  static const std::pair<const char*, const char*> rules[] = {
      {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
      {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
      {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
      {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
      {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
      {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
      {"iviti", "ive"},   {"biliti", "ble"}};
  for (auto& [suf, rep] : rules)
    if (replace_if(w, suf, rep, 0)) return;
}

void step3(std::string& w) {
  static const std::pair<const char*, const char*> rules[] = {
      {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
      {"ical", "ic"},  {"ful", ""},   {"ness", ""}};
  for (auto& [suf, rep] : rules)
    if (replace_if(w, suf, rep, 0)) return;
}

void step4(std::string& w) {
  static const char* sufs[] = {"al",  "ance", "ence", "er",  "ic",  "able",
                               "ible", "ant",  "ement", "ment", "ent"};
  for (const char* suf : sufs) {
    if (ends_with(w, suf)) {
      if (measure(w, stem_end(w, suf)) > 1) w.resize(stem_end(w, suf) + 1);
      return;
    }
  }
  if (ends_with(w, "ion")) {
    int e = stem_end(w, "ion");
    if (e >= 0 && (w[e] == 's' || w[e] == 't') && measure(w, e) > 1)
      w.resize(e + 1);
    return;
  }
  static const char* tail[] = {"ou", "ism", "ate", "iti", "ous", "ive", "ize"};
  for (const char* suf : tail) {
    if (ends_with(w, suf)) {
      if (measure(w, stem_end(w, suf)) > 1) w.resize(stem_end(w, suf) + 1);
      return;
    }
  }
}

void step5(std::string& w) {
  int e = static_cast<int>(w.size()) - 1;
  if (w.back() == 'e') {
    int m = measure(w, e - 1);
    if (m > 1 || (m == 1 && !ends_cvc(w, e - 1))) w.resize(w.size() - 1);
  }
  e = static_cast<int>(w.size()) - 1;
  if (w.back() == 'l' && double_consonant(w, e) && measure(w, e) > 1)
    w.resize(w.size() - 1);
}

}  // namespace

std::string porter_stem(const std::string& word) {
  if (word.size() <= 2) return word;
  std::string w = word;
  step1ab(w);
  step1c(w);
  step2(w);
  step3(w);
  step4(w);
  step5(w);
  return w;
}

std::string no_stem(const std::string& word) { return word; }

std::vector<std::string> tokenize_and_normalize(const std::string& raw_text,
                                                const StopwordSet& stopwords,
                                                const Stemmer& stemmer) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    if (stopwords.find(cur) == stopwords.end()) out.push_back(stemmer(cur));
    cur.clear();
  };
  for (unsigned char c : raw_text) {
    if (std::isalpha(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword file: " + path);
  StopwordSet set;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    set.insert(to_lower(line));
  }
  return set;
}

}  // namespace ellda
