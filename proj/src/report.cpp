#include "ellda/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ellda {

ReportFormat parse_report_format(const std::string& name) {
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  if (name == "csv") return ReportFormat::csv;
  if (name == "jsonl" || name == "json-lines") return ReportFormat::jsonl;
  throw std::invalid_argument("unknown report format: " + name);
}

namespace {

void sort_entries(std::vector<std::pair<int, double>>& entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

int percent(double v) { return static_cast<int>(v * 100.0 + 0.5); }

}  // namespace

std::vector<std::pair<int, double>> threshold_topics(
    const std::vector<double>& theta_row, double threshold) {
  std::vector<std::pair<int, double>> out;
  for (size_t k = 0; k < theta_row.size(); ++k)
    if (theta_row[k] > threshold) out.emplace_back(static_cast<int>(k), theta_row[k]);
  sort_entries(out);
  return out;
}

std::vector<std::pair<int, double>> threshold_topics(
    const std::vector<std::pair<int, double>>& theta_row, double threshold) {
  std::vector<std::pair<int, double>> out;
  for (const auto& e : theta_row)
    if (e.second > threshold) out.push_back(e);
  sort_entries(out);
  return out;
}

std::vector<PartyReport> build_reports(
    const TopicModelFile& standard_model, const TopicModelFile& labeled_model,
    const std::vector<LabelAssignment>& assignments, const Corpus& corpus,
    const ReportConfig& config) {
  std::map<std::string, size_t> std_idx, lab_idx;
  for (size_t i = 0; i < standard_model.doc_ids.size(); ++i)
    std_idx[standard_model.doc_ids[i]] = i;
  for (size_t i = 0; i < labeled_model.doc_ids.size(); ++i)
    lab_idx[labeled_model.doc_ids[i]] = i;
  std::map<std::string, const LabelAssignment*> by_doc;
  for (const auto& a : assignments) by_doc[a.doc_id] = &a;

  std::vector<PartyReport> reports;
  for (const auto& doc : corpus.documents) {
    auto si = std_idx.find(doc.doc_id);
    auto li = lab_idx.find(doc.doc_id);
    if (si == std_idx.end() || li == lab_idx.end())
      throw std::runtime_error("model/corpus doc_id mismatch: " + doc.doc_id);

    PartyReport r;
    r.doc_id = doc.doc_id;
    r.party = doc.party;
    if (auto it = by_doc.find(doc.doc_id); it != by_doc.end())
      r.entity_ranking = it->second->labels;

    for (auto [k, p] :
         threshold_topics(standard_model.theta[si->second], config.threshold)) {
      StandardTopicEntry e;
      e.proportion = p;
      int limit = config.words_per_topic;
      for (const auto& [word, prob] : standard_model.top_words[k]) {
        if (limit-- <= 0) break;
        e.words.push_back(word);
      }
      r.standard_topics.push_back(std::move(e));
    }

    for (auto [k, p] :
         threshold_topics(labeled_model.theta[li->second], config.threshold))
      r.labeled_topics.push_back({labeled_model.topic_names[k], p});

    reports.push_back(std::move(r));
  }
  return reports;
}

ReportSummary build_summary(const TopicModelFile& standard_model,
                            const TopicModelFile& labeled_model,
                            const Corpus& corpus, const ReportConfig& config) {
  ReportSummary s;
  s.n_docs = corpus.size();
  s.label_count = labeled_model.num_topics;
  s.standard_topics = standard_model.num_topics;
  auto describe = [](const TopicModelFile& m) {
    std::ostringstream ss;
    ss << "alpha=" << m.alpha << " beta=" << m.beta << " iterations="
       << m.iterations << " burn_in=" << m.burn_in << " seed=" << m.seed;
    return ss.str();
  };
  s.standard_config = describe(standard_model);
  s.labeled_config = describe(labeled_model);
  s.threshold = config.threshold;
  return s;
}

void write_markdown_report(const std::vector<PartyReport>& reports,
                           const ReportSummary& summary,
                           const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report: " + path);

  out << "# Topic comparison report\n\n";
  out << "- documents: " << summary.n_docs << "\n";
  out << "- standard LDA topics (K): " << summary.standard_topics << "\n";
  out << "- entity labels (L): " << summary.label_count << "\n";
  out << "- display threshold: " << summary.threshold << "\n";
  out << "- standard config: " << summary.standard_config << "\n";
  out << "- labeled config: " << summary.labeled_config << "\n";

  for (const auto& r : reports) {
    out << "\n## " << r.party << " (" << r.doc_id << ")\n\n";
    out << "| Entities - tf-idf ranked | Standard LDA | Entity-labeled LDA |\n";
    out << "|---|---|---|\n";

    std::string entities;
    for (size_t i = 0; i < r.entity_ranking.size(); ++i) {
      if (i) entities += "<br>";
      entities += r.entity_ranking[i];
    }
    std::string standard;
    for (size_t i = 0; i < r.standard_topics.size(); ++i) {
      const auto& t = r.standard_topics[i];
      if (i) standard += "<br>";
      standard += std::to_string(percent(t.proportion)) + "%, \"";
      for (size_t j = 0; j < t.words.size(); ++j) {
        if (j) standard += ", ";
        standard += t.words[j];
      }
      standard += "\"";
    }
    std::string labeled;
    for (size_t i = 0; i < r.labeled_topics.size(); ++i) {
      if (i) labeled += "<br>";
      labeled += r.labeled_topics[i].label + ", " +
                 std::to_string(percent(r.labeled_topics[i].proportion)) + "%";
    }
    out << "| " << entities << " | " << standard << " | " << labeled << " |\n";
  }
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> split_space(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

}  // namespace

void write_csv_report(const std::vector<PartyReport>& reports,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << "doc_id,party,column,rank,name,proportion\n";
  for (const auto& r : reports) {
    for (size_t i = 0; i < r.entity_ranking.size(); ++i)
      out << csv_quote(r.doc_id) << "," << csv_quote(r.party)
          << ",entity_ranking," << i + 1 << "," << csv_quote(r.entity_ranking[i])
          << ",\n";
    for (size_t i = 0; i < r.standard_topics.size(); ++i) {
      std::string words;
      for (size_t j = 0; j < r.standard_topics[i].words.size(); ++j) {
        if (j) words += ' ';
        words += r.standard_topics[i].words[j];
      }
      out << csv_quote(r.doc_id) << "," << csv_quote(r.party)
          << ",standard_lda," << i + 1 << "," << csv_quote(words) << ","
          << fmt(r.standard_topics[i].proportion) << "\n";
    }
    for (size_t i = 0; i < r.labeled_topics.size(); ++i)
      out << csv_quote(r.doc_id) << "," << csv_quote(r.party)
          << ",labeled_lda," << i + 1 << ","
          << csv_quote(r.labeled_topics[i].label) << ","
          << fmt(r.labeled_topics[i].proportion) << "\n";
  }
}

std::vector<PartyReport> read_csv_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open report: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "doc_id,party,column,rank,name,proportion")
    throw std::runtime_error("unexpected csv report header");

  std::vector<PartyReport> reports;
  auto current = [&](const std::string& doc_id,
                     const std::string& party) -> PartyReport& {
    if (reports.empty() || reports.back().doc_id != doc_id) {
      PartyReport r;
      r.doc_id = doc_id;
      r.party = party;
      reports.push_back(std::move(r));
    }
    return reports.back();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = csv_split(line);
    if (f.size() != 6) throw std::runtime_error("malformed csv row: " + line);
    PartyReport& r = current(f[0], f[1]);
    if (f[2] == "entity_ranking") {
      r.entity_ranking.push_back(f[4]);
    } else if (f[2] == "standard_lda") {
      StandardTopicEntry e;
      e.words = split_space(f[4]);
      e.proportion = std::stod(f[5]);
      r.standard_topics.push_back(std::move(e));
    } else if (f[2] == "labeled_lda") {
      r.labeled_topics.push_back({f[4], std::stod(f[5])});
    } else {
      throw std::runtime_error("unknown csv column type: " + f[2]);
    }
  }
  return reports;
}

void write_jsonl_report(const std::vector<PartyReport>& reports,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  for (const auto& r : reports) {
    nlohmann::json j;
    j["doc_id"] = r.doc_id;
    j["party"] = r.party;
    j["entity_ranking"] = r.entity_ranking;
    j["standard_topics"] = nlohmann::json::array();
    for (const auto& t : r.standard_topics)
      j["standard_topics"].push_back(
          {{"proportion", t.proportion}, {"words", t.words}});
    j["labeled_topics"] = nlohmann::json::array();
    for (const auto& t : r.labeled_topics)
      j["labeled_topics"].push_back(
          {{"label", t.label}, {"proportion", t.proportion}});
    out << j.dump() << "\n";
  }
}

std::vector<PartyReport> read_jsonl_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open report: " + path);
  std::vector<PartyReport> reports;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    PartyReport r;
    r.doc_id = j.at("doc_id").get<std::string>();
    r.party = j.at("party").get<std::string>();
    r.entity_ranking = j.at("entity_ranking").get<std::vector<std::string>>();
    for (const auto& t : j.at("standard_topics")) {
      StandardTopicEntry e;
      e.proportion = t.at("proportion").get<double>();
      e.words = t.at("words").get<std::vector<std::string>>();
      r.standard_topics.push_back(std::move(e));
    }
    for (const auto& t : j.at("labeled_topics"))
      r.labeled_topics.push_back({t.at("label").get<std::string>(),
                                  t.at("proportion").get<double>()});
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace ellda
