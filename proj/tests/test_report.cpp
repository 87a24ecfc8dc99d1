#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "ellda/report.hpp"

using namespace ellda;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<PartyReport> sample_reports() {
  PartyReport r1;
  r1.doc_id = "greens";
  r1.party = "Les Verts";
  r1.entity_ranking = {"Developing_country", "Consumer",
                       "Genetically_modified_organism", "Development_aid",
                       "Biodiversity"};
  r1.standard_topics = {{0.20, {"political", "term", "development"}},
                        {0.15, {"economic", "sustainable", "developing"}}};
  r1.labeled_topics = {{"Consumer", 0.47},
                       {"Genetically_modified_organism", 0.34},
                       {"Development_aid", 0.14}};
  PartyReport r2;
  r2.doc_id = "pnv";
  r2.party = "Partido Nacionalista Vasco";
  r2.entity_ranking = {"Basque_people"};
  r2.labeled_topics = {{"Basque_people", 1.0}};
  return {r1, r2};
}

}  // namespace

TEST_CASE("threshold keeps strictly-greater entries, descending") {
  auto kept = threshold_topics(std::vector<double>{0.47, 0.34, 0.14, 0.05});
  REQUIRE(kept.size() == 3);
  CHECK(kept[0] == std::pair<int, double>{0, 0.47});
  CHECK(kept[1] == std::pair<int, double>{1, 0.34});
  CHECK(kept[2] == std::pair<int, double>{2, 0.14});
}

TEST_CASE("uniform row over many topics renders nothing") {
  std::vector<double> row(300, 1.0 / 300);
  CHECK(threshold_topics(row).empty());
}

TEST_CASE("a single certain topic renders at 100%") {
  auto kept = threshold_topics(std::vector<double>{1.0});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].second == 1.0);
}

TEST_CASE("threshold comparison is strict") {
  auto kept = threshold_topics(std::vector<double>{0.10, 0.90});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].first == 1);
}

TEST_CASE("threshold at or above 1 yields an empty list") {
  CHECK(threshold_topics(std::vector<double>{0.5, 0.5}, 1.0).empty());
}

TEST_CASE("sparse rows threshold the same way") {
  std::vector<std::pair<int, double>> row{{4, 0.05}, {2, 0.47}, {9, 0.14}};
  auto kept = threshold_topics(row);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].first == 2);
  CHECK(kept[1].first == 9);
}

TEST_CASE("csv report round-trips to equal reports") {
  auto reports = sample_reports();
  auto path = fs::temp_directory_path() / "ellda_report.csv";
  write_csv_report(reports, path.string());
  CHECK(read_csv_report(path.string()) == reports);
  fs::remove(path);
}

TEST_CASE("jsonl report round-trips to equal reports") {
  auto reports = sample_reports();
  auto path = fs::temp_directory_path() / "ellda_report.jsonl";
  write_jsonl_report(reports, path.string());
  CHECK(read_jsonl_report(path.string()) == reports);
  fs::remove(path);
}

TEST_CASE("markdown report carries the three-column layout") {
  auto reports = sample_reports();
  ReportSummary summary;
  summary.n_docs = 2;
  summary.label_count = 6;
  summary.standard_topics = 300;
  summary.threshold = 0.10;
  auto path = fs::temp_directory_path() / "ellda_report.md";
  write_markdown_report(reports, summary, path.string());
  std::string text = slurp(path);
  CHECK(text.find("| Entities - tf-idf ranked | Standard LDA | Entity-labeled LDA |") !=
        std::string::npos);
  CHECK(text.find("## Les Verts (greens)") != std::string::npos);
  CHECK(text.find("Consumer, 47%") != std::string::npos);
  CHECK(text.find("Basque_people, 100%") != std::string::npos);
  fs::remove(path);
}

TEST_CASE("report emission is byte-deterministic") {
  auto reports = sample_reports();
  ReportSummary summary;
  auto p1 = fs::temp_directory_path() / "ellda_r1.md";
  auto p2 = fs::temp_directory_path() / "ellda_r2.md";
  write_markdown_report(reports, summary, p1.string());
  write_markdown_report(reports, summary, p2.string());
  CHECK(slurp(p1) == slurp(p2));
  fs::remove(p1);
  fs::remove(p2);
}

TEST_CASE("csv fields with commas survive quoting") {
  PartyReport r;
  r.doc_id = "d1";
  r.party = "Party, with comma";
  r.labeled_topics = {{"Label\"quoted\"", 0.5}};
  auto path = fs::temp_directory_path() / "ellda_quote.csv";
  write_csv_report({r}, path.string());
  auto back = read_csv_report(path.string());
  REQUIRE(back.size() == 1);
  CHECK(back[0].party == r.party);
  CHECK(back[0].labeled_topics[0].label == r.labeled_topics[0].label);
  fs::remove(path);
}

TEST_CASE("build_reports fails on a doc_id mismatch") {
  Corpus corpus;
  Document doc;
  doc.doc_id = "dX";
  corpus.documents.push_back(doc);
  TopicModelFile standard, labeled;
  CHECK_THROWS_WITH_AS(
      build_reports(standard, labeled, {}, corpus, ReportConfig{}),
      doctest::Contains("dX"), std::runtime_error);
}
