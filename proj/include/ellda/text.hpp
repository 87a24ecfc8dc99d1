#ifndef ELLDA_TEXT_HPP
#define ELLDA_TEXT_HPP

#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

namespace ellda {

using StopwordSet = std::unordered_set<std::string>;
using Stemmer = std::function<std::string(const std::string&)>;

// Porter's suffix-stripping algorithm. Deterministic, no external models;
// stands in for the lemmatizer behind the normalization interface.
std::string porter_stem(const std::string& word);

// Identity normalizer, useful when the raw surface form is wanted.
std::string no_stem(const std::string& word);

// Lowercases, splits on maximal alphabetic runs (hyphens split), drops
// stopwords on the lowercased surface form, then stems survivors.
// Punctuation and digits never appear in the output.
std::vector<std::string> tokenize_and_normalize(const std::string& raw_text,
                                                const StopwordSet& stopwords,
                                                const Stemmer& stemmer);

// One stopword per line, '#' comments and blank lines ignored.
StopwordSet load_stopwords(const std::string& path);

std::string to_lower(const std::string& s);

}  // namespace ellda

#endif
