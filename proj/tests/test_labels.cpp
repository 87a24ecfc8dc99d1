#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "ellda/labels.hpp"

using namespace ellda;

namespace {

AnnotationMap make_map(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& docs) {
  AnnotationMap map;
  for (const auto& [doc_id, entities] : docs) {
    auto& anns = map[doc_id];
    int offset = 0;
    for (const auto& e : entities)
      anns.push_back({e, e, offset++, 1.0});
  }
  return map;
}

// Brute-force recount straight from the annotation lists, independent of
// compute_entity_tfidf's implementation.
std::map<std::string, std::vector<EntityScore>> oracle_tfidf(
    const AnnotationMap& map, int n) {
  std::map<std::string, std::vector<EntityScore>> out;
  for (const auto& [doc_id, anns] : map) {
    out[doc_id];  // docs without annotations still get an (empty) entry
    std::map<std::string, EntityScore> per_entity;
    for (const auto& a : anns) {
      auto& s = per_entity[a.entity_id];
      s.entity_id = a.entity_id;
      ++s.tf;
    }
    for (auto& [entity, s] : per_entity) {
      s.df = 0;
      for (const auto& [other_id, other] : map)
        for (const auto& a : other)
          if (a.entity_id == entity) {
            ++s.df;
            break;
          }
      s.idf = std::log(double(n) / s.df);
      s.score = s.tf * s.idf;
      out[doc_id].push_back(s);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("tf-idf on the worked three-document example") {
  auto map = make_map({{"doc1", {"E", "E", "E", "E"}},
                       {"doc2", {"X"}},
                       {"doc3", {"E"}}});
  auto scores = compute_entity_tfidf(map, 3);
  const EntityScore* e = nullptr;
  for (const auto& s : scores["doc1"])
    if (s.entity_id == "E") e = &s;
  REQUIRE(e != nullptr);
  CHECK(e->tf == 4);
  CHECK(e->df == 2);
  CHECK(e->idf == doctest::Approx(0.405465).epsilon(1e-5));
  CHECK(e->score == doctest::Approx(1.621860).epsilon(1e-5));
}

TEST_CASE("corpus-wide entity scores zero everywhere") {
  auto map = make_map({{"d1", {"E"}}, {"d2", {"E"}}, {"d3", {"E", "E"}}});
  auto scores = compute_entity_tfidf(map, 3);
  for (const auto& [doc_id, entity_scores] : scores)
    for (const auto& s : entity_scores) {
      CHECK(s.idf == 0.0);
      CHECK(s.score == 0.0);
    }
}

TEST_CASE("document without annotations gets an empty score list") {
  auto map = make_map({{"d1", {"E"}}, {"d2", {}}});
  auto scores = compute_entity_tfidf(map, 2);
  CHECK(scores["d2"].empty());
}

TEST_CASE("select_labels takes the k best by score then id") {
  std::map<std::string, std::vector<EntityScore>> scores;
  scores["d"] = {{"A", 0, 0, 0, 3.2}, {"B", 0, 0, 0, 2.1}, {"C", 0, 0, 0, 2.1},
                 {"D", 0, 0, 0, 0.9}, {"E", 0, 0, 0, 0.5}, {"F", 0, 0, 0, 0.1}};
  auto out = select_labels(scores, 5);
  REQUIRE(out.size() == 1);
  CHECK(out[0].labels ==
        std::vector<std::string>{"A", "B", "C", "D", "E"});
}

TEST_CASE("equal scores break ties lexicographically") {
  std::map<std::string, std::vector<EntityScore>> scores;
  scores["d"] = {{"B", 0, 0, 0, 1.0}, {"A", 0, 0, 0, 1.0}};
  auto out = select_labels(scores, 1);
  CHECK(out[0].labels == std::vector<std::string>{"A"});
}

TEST_CASE("zero-score entities are never selected") {
  std::map<std::string, std::vector<EntityScore>> scores;
  scores["d"] = {{"A", 0, 0, 0, 0.0}};
  auto out = select_labels(scores, 5);
  CHECK(out[0].labels.empty());
}

TEST_CASE("label space indexes the union in first-occurrence order") {
  std::vector<LabelAssignment> assignments = {
      {"d1", {"A", "B"}, {2, 1}},
      {"d2", {"B", "C"}, {2, 1}},
  };
  LabelSpace space = build_label_space(assignments);
  REQUIRE(space.size() == 3);
  CHECK(space.index("A") == 0);
  CHECK(space.index("B") == 1);
  CHECK(space.index("C") == 2);
  for (int i = 0; i < space.size(); ++i)
    CHECK(space.index(space.label(i)) == i);
}

TEST_CASE("disjoint label pairs produce the sum of sizes") {
  std::vector<LabelAssignment> assignments = {{"d1", {"A", "B"}, {2, 1}},
                                              {"d2", {"C", "D"}, {2, 1}}};
  CHECK(build_label_space(assignments).size() == 4);
}

TEST_CASE("identical label sets collapse to one document's count") {
  std::vector<LabelAssignment> assignments = {{"d1", {"A", "B"}, {2, 1}},
                                              {"d2", {"A", "B"}, {2, 1}}};
  CHECK(build_label_space(assignments).size() == 2);
}

TEST_CASE("empty union is fatal") {
  std::vector<LabelAssignment> assignments = {{"d1", {}, {}}};
  CHECK_THROWS_WITH_AS(build_label_space(assignments),
                       doctest::Contains("no labels"), std::runtime_error);
}

TEST_CASE("tf-idf matches the brute-force oracle on random corpora") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    AnnotationMap map;
    int n_docs = 1 + rng() % 10;
    for (int d = 0; d < n_docs; ++d) {
      auto& anns = map["d" + std::to_string(d)];
      int n = rng() % 12;
      for (int i = 0; i < n; ++i)
        anns.push_back({"E" + std::to_string(rng() % 20), "e", i, 1.0});
    }
    auto got = compute_entity_tfidf(map, n_docs);
    auto want = oracle_tfidf(map, n_docs);
    REQUIRE(got.size() == want.size());
    for (auto& [doc_id, scores] : want) {
      auto sort_by_id = [](std::vector<EntityScore>& v) {
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
          return a.entity_id < b.entity_id;
        });
      };
      sort_by_id(scores);
      auto theirs = got[doc_id];
      sort_by_id(theirs);
      REQUIRE(theirs.size() == scores.size());
      for (size_t i = 0; i < scores.size(); ++i) {
        CHECK(theirs[i].entity_id == scores[i].entity_id);
        CHECK(theirs[i].tf == scores[i].tf);
        CHECK(theirs[i].df == scores[i].df);
        CHECK(theirs[i].idf == scores[i].idf);  // same formula, exact
        CHECK(theirs[i].score == scores[i].score);
      }
    }
  }
}

TEST_CASE("scaling one document's tf leaves its ranking unchanged") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    std::map<std::string, std::vector<EntityScore>> scores;
    int n = 2 + rng() % 6;
    for (int i = 0; i < n; ++i) {
      int tf = 1 + int(rng() % 5);
      scores["d"].push_back({"E" + std::to_string(i), tf, 1, 0.7, tf * 0.7});
    }
    auto base = select_labels(scores, 5);
    int factor = 2 + rng() % 4;
    for (auto& s : scores["d"]) {
      s.tf *= factor;
      s.score = s.tf * s.idf;
    }
    auto scaled = select_labels(scores, 5);
    CHECK(base[0].labels == scaled[0].labels);
  }
}

TEST_CASE("label assignments round-trip through the label file") {
  std::vector<LabelAssignment> assignments = {
      {"d1", {"Consumer", "Biodiversity"}, {1.62, 0.41}},
      {"d2", {}, {}},
  };
  std::string path =
      (std::filesystem::temp_directory_path() / "ellda_labels.tsv").string();
  save_label_assignments(assignments, path);
  auto loaded = load_label_assignments(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].doc_id == "d1");
  CHECK(loaded[0].labels == assignments[0].labels);
  CHECK(loaded[0].scores == assignments[0].scores);
  CHECK(loaded[1].labels.empty());
  std::filesystem::remove(path);
}
