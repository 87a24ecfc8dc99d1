#include "ellda/labels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace ellda {

int LabelSpace::index(const std::string& label) const {
  auto it = index_.find(label);
  return it == index_.end() ? -1 : it->second;
}

int LabelSpace::add(const std::string& label) {
  auto it = index_.find(label);
  if (it != index_.end()) return it->second;
  int idx = static_cast<int>(labels_.size());
  labels_.push_back(label);
  index_.emplace(label, idx);
  return idx;
}

std::map<std::string, std::vector<EntityScore>> compute_entity_tfidf(
    const AnnotationMap& annotations, int corpus_size) {
  if (corpus_size < 1) throw std::invalid_argument("corpus_size must be >= 1");

  std::unordered_map<std::string, int> df;
  for (const auto& [doc_id, anns] : annotations) {
    std::unordered_set<std::string> seen;
    for (const auto& a : anns)
      if (seen.insert(a.entity_id).second) ++df[a.entity_id];
  }

  std::map<std::string, std::vector<EntityScore>> out;
  for (const auto& [doc_id, anns] : annotations) {
    std::map<std::string, int> tf;  // ordered for deterministic output
    for (const auto& a : anns) ++tf[a.entity_id];
    auto& scores = out[doc_id];
    for (const auto& [entity, count] : tf) {
      EntityScore s;
      s.entity_id = entity;
      s.tf = count;
      s.df = df[entity];
      s.idf = std::log(static_cast<double>(corpus_size) / s.df);
      s.score = s.tf * s.idf;
      scores.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<LabelAssignment> select_labels(
    const std::map<std::string, std::vector<EntityScore>>& scores, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");

  std::vector<LabelAssignment> out;
  for (const auto& [doc_id, entity_scores] : scores) {
    std::vector<EntityScore> positive;
    for (const auto& s : entity_scores)
      if (s.score > 0.0) positive.push_back(s);
    std::sort(positive.begin(), positive.end(),
              [](const EntityScore& a, const EntityScore& b) {
                if (a.score != b.score) return a.score > b.score;
                return a.entity_id < b.entity_id;
              });
    if (positive.size() > static_cast<size_t>(k)) positive.resize(k);

    LabelAssignment assignment;
    assignment.doc_id = doc_id;
    for (const auto& s : positive) {
      assignment.labels.push_back(s.entity_id);
      assignment.scores.push_back(s.score);
    }
    if (assignment.labels.empty())
      std::cerr << "warning: document " << doc_id
                << " has no positive-score entities; excluded from labeled "
                   "inference\n";
    out.push_back(std::move(assignment));
  }
  return out;
}

LabelSpace build_label_space(const std::vector<LabelAssignment>& assignments) {
  if (assignments.empty())
    throw std::invalid_argument("assignments must be nonempty");
  LabelSpace space;
  for (const auto& a : assignments)
    for (const auto& label : a.labels) space.add(label);
  if (space.size() == 0) throw std::runtime_error("no labels in corpus");
  return space;
}

void save_label_assignments(const std::vector<LabelAssignment>& assignments,
                            const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write labels: " + path);
  out.precision(17);
  for (const auto& a : assignments) {
    out << a.doc_id;
    for (size_t i = 0; i < a.labels.size(); ++i)
      out << "\t" << a.labels[i] << ":" << a.scores[i];
    out << "\n";
  }
}

std::vector<LabelAssignment> load_label_assignments(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open labels: " + path);
  std::vector<LabelAssignment> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    LabelAssignment a;
    bool first = true;
    while (std::getline(ss, field, '\t')) {
      if (first) {
        a.doc_id = field;
        first = false;
        continue;
      }
      auto colon = field.find_last_of(':');
      if (colon == std::string::npos)
        throw std::runtime_error("malformed label field: " + field);
      a.labels.push_back(field.substr(0, colon));
      a.scores.push_back(std::stod(field.substr(colon + 1)));
    }
    if (first) throw std::runtime_error("malformed label line: " + line);
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace ellda
