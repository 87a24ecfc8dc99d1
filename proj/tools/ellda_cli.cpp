// Pipeline driver: ingest -> link -> label -> train -> report, each stage
// independently re-runnable from its cached artifact.

#include <atomic>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ellda/annotate.hpp"
#include "ellda/config.hpp"
#include "ellda/corpus.hpp"
#include "ellda/labels.hpp"
#include "ellda/report.hpp"
#include "ellda/sampler.hpp"

namespace fs = std::filesystem;
using namespace ellda;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitStale = 2;
constexpr int kExitService = 3;

struct StageError : std::runtime_error {
  int code;
  StageError(int code, const std::string& what)
      : std::runtime_error(what), code(code) {}
};

struct Paths {
  fs::path out;
  fs::path corpus_snapshot;
  fs::path annotations;
  fs::path labels;
  fs::path model_standard;
  fs::path model_labeled;

  explicit Paths(const PipelineConfig& c) : out(c.output_dir) {
    corpus_snapshot = out / "corpus.snapshot";
    annotations = out / "annotations.tsv";
    labels = out / "labels.tsv";
    model_standard = out / "model_standard.txt";
    model_labeled = out / "model_labeled.txt";
  }
};

std::string now_rfc3339() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_meta(const fs::path& artifact, const std::string& config_hash,
                const std::string& upstream_hash, std::uint64_t seed) {
  ArtifactMeta meta;
  meta.config_hash = config_hash;
  meta.upstream_hash = upstream_hash;
  meta.seed = seed;
  meta.timestamp = now_rfc3339();
  save_artifact_meta(meta, artifact.string());
}

// The artifact must exist, and if it recorded an upstream hash it must
// still match the upstream artifact on disk.
void require_artifact(const fs::path& artifact, const std::string& produced_by,
                      const std::optional<fs::path>& upstream = std::nullopt) {
  if (!fs::exists(artifact))
    throw StageError(kExitStale, "missing artifact " + artifact.string() +
                                     "; run `ellda " + produced_by + "` first");
  if (!upstream) return;
  auto meta = load_artifact_meta(artifact.string());
  if (!meta) return;  // hand-placed artifact, accept as-is
  if (!meta->upstream_hash.empty() && fs::exists(*upstream) &&
      meta->upstream_hash != hash_file(upstream->string()))
    throw StageError(kExitStale,
                     "artifact " + artifact.string() + " is stale (upstream " +
                         upstream->string() + " changed); re-run `ellda " +
                         produced_by + "`");
}

void cmd_ingest(const PipelineConfig& config, const std::string& config_hash) {
  Paths paths(config);
  fs::create_directories(paths.out);
  StopwordSet stopwords;
  if (!config.stopwords.empty()) stopwords = load_stopwords(config.stopwords);
  Corpus corpus = load_corpus(config.corpus_dir, config.manifest, stopwords,
                              porter_stem, config.min_count);
  save_corpus_snapshot(corpus, paths.corpus_snapshot.string());
  write_meta(paths.corpus_snapshot, config_hash, "", 0);
  std::cout << "ingest: " << corpus.size() << " documents, vocabulary "
            << corpus.vocabulary.size() << " -> " << paths.corpus_snapshot
            << "\n";
}

AnnotationMap annotate_all_remote(const PipelineConfig& config,
                                  const std::vector<ManifestEntry>& entries,
                                  const std::string& corpus_dir) {
  SpotlightClient client;
  client.endpoint = config.endpoint;
  client.support = config.spotlight_support;
  client.types = config.spotlight_types;

  fs::create_directories(config.cache_dir);
  std::string param_key = config.endpoint + "|" + config.spotlight_support +
                          "|" + config.spotlight_types;

  AnnotationMap result;
  std::mutex mu;
  std::atomic<size_t> next{0};
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= entries.size()) return;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (failure) return;
      }
      const auto& e = entries[i];
      std::ifstream in(corpus_dir + "/" + e.filename, std::ios::binary);
      std::ostringstream text;
      text << in.rdbuf();
      std::string cache_key =
          e.doc_id + "_" + hash_bytes(text.str() + "|" + param_key);
      fs::path cache_file = fs::path(config.cache_dir) / (cache_key + ".tsv");
      try {
        std::vector<EntityAnnotation> anns;
        if (fs::exists(cache_file)) {
          anns = load_annotations(cache_file.string());
        } else {
          anns = client.annotate(e.doc_id, text.str());
          std::lock_guard<std::mutex> lock(mu);
          save_annotations(anns, cache_file.string());
        }
        std::lock_guard<std::mutex> lock(mu);
        result[e.doc_id] = std::move(anns);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  int n_threads = std::min<int>(config.max_concurrent_requests,
                                static_cast<int>(entries.size()));
  std::vector<std::thread> threads;
  for (int t = 0; t < std::max(1, n_threads); ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return result;
}

void cmd_link(const PipelineConfig& config, const std::string& config_hash) {
  Paths paths(config);
  require_artifact(paths.corpus_snapshot, "ingest");
  auto entries = load_manifest(config.manifest);

  AnnotationMap raw;
  if (config.offline) {
    Gazetteer gaz = load_gazetteer(config.gazetteer);
    for (const auto& e : entries) {
      std::ifstream in(config.corpus_dir + "/" + e.filename, std::ios::binary);
      if (!in)
        throw std::runtime_error("manifest references missing file: " +
                                 e.filename);
      std::ostringstream text;
      text << in.rdbuf();
      raw[e.doc_id] = annotate_gazetteer(text.str(), gaz);
    }
  } else {
    try {
      raw = annotate_all_remote(config, entries, config.corpus_dir);
    } catch (const RemoteError& e) {
      throw StageError(kExitService, std::string("entity linking failed for ") +
                                         e.doc_id() + ": " + e.what());
    }
  }

  FilterPolicy policy;
  policy.min_confidence = config.min_confidence;
  policy.max_doc_fraction = config.max_doc_fraction;
  if (!config.blocklist.empty()) policy.blocklist = load_blocklist(config.blocklist);
  AnnotationMap filtered =
      filter_annotations(raw, policy, static_cast<int>(entries.size()));

  save_annotation_map(filtered, paths.annotations.string());
  write_meta(paths.annotations, config_hash,
             hash_file(paths.corpus_snapshot.string()), 0);
  size_t total = 0;
  for (const auto& [id, anns] : filtered) total += anns.size();
  std::cout << "link: " << total << " annotations across " << filtered.size()
            << " documents -> " << paths.annotations << "\n";
}

void cmd_label(const PipelineConfig& config, const std::string& config_hash) {
  Paths paths(config);
  require_artifact(paths.annotations, "link", paths.corpus_snapshot);
  Corpus corpus = load_corpus_snapshot(paths.corpus_snapshot.string());
  AnnotationMap annotations = load_annotation_map(paths.annotations.string());

  auto scores = compute_entity_tfidf(annotations, corpus.size());
  auto assignments = select_labels(scores, config.label_k);
  save_label_assignments(assignments, paths.labels.string());
  write_meta(paths.labels, config_hash, hash_file(paths.annotations.string()), 0);

  LabelSpace space = build_label_space(assignments);
  std::cout << "label: " << space.size() << " distinct labels over "
            << assignments.size() << " documents -> " << paths.labels << "\n";
}

void cmd_train(const PipelineConfig& config, const std::string& config_hash,
               const std::string& mode) {
  Paths paths(config);
  require_artifact(paths.corpus_snapshot, "ingest");
  Corpus corpus = load_corpus_snapshot(paths.corpus_snapshot.string());

  if (mode == "standard") {
    InferenceMode m;
    m.labeled = false;
    m.num_topics = config.standard_topics;
    TopicModel model = run_inference(corpus, m, config.standard);
    save_topic_model(model, corpus.vocabulary, paths.model_standard.string(),
                     config.words_per_topic);
    write_meta(paths.model_standard, config_hash,
               hash_file(paths.corpus_snapshot.string()),
               config.standard.seed);
    std::cout << "train: standard LDA K=" << config.standard_topics << " -> "
              << paths.model_standard << "\n";
  } else if (mode == "labeled") {
    require_artifact(paths.labels, "label", paths.annotations);
    auto assignments = load_label_assignments(paths.labels.string());
    LabelSpace space = build_label_space(assignments);
    InferenceMode m;
    m.labeled = true;
    m.label_space = &space;
    m.assignments = &assignments;
    TopicModel model = run_inference(corpus, m, config.labeled);
    save_topic_model(model, corpus.vocabulary, paths.model_labeled.string(),
                     config.words_per_topic);
    write_meta(paths.model_labeled, config_hash,
               hash_file(paths.labels.string()), config.labeled.seed);
    std::cout << "train: labeled LDA L=" << space.size() << " -> "
              << paths.model_labeled << "\n";
  } else {
    throw StageError(kExitUsage, "unknown train mode: " + mode);
  }
}

void cmd_report(const PipelineConfig& config, const std::string& config_hash) {
  Paths paths(config);
  require_artifact(paths.model_standard, "train --mode standard",
                   paths.corpus_snapshot);
  require_artifact(paths.model_labeled, "train --mode labeled", paths.labels);
  require_artifact(paths.labels, "label", paths.annotations);

  Corpus corpus = load_corpus_snapshot(paths.corpus_snapshot.string());
  auto standard = load_topic_model(paths.model_standard.string());
  auto labeled = load_topic_model(paths.model_labeled.string());
  auto assignments = load_label_assignments(paths.labels.string());

  ReportConfig rc;
  rc.threshold = config.report_threshold;
  rc.words_per_topic = config.words_per_topic;
  auto reports = build_reports(standard, labeled, assignments, corpus, rc);
  auto summary = build_summary(standard, labeled, corpus, rc);

  fs::path out;
  switch (parse_report_format(config.report_format)) {
    case ReportFormat::markdown:
      out = paths.out / "report.md";
      write_markdown_report(reports, summary, out.string());
      break;
    case ReportFormat::csv:
      out = paths.out / "report.csv";
      write_csv_report(reports, out.string());
      break;
    case ReportFormat::jsonl:
      out = paths.out / "report.jsonl";
      write_jsonl_report(reports, out.string());
      break;
  }
  write_meta(out, config_hash, hash_file(paths.model_labeled.string()), 0);
  std::cout << "report: " << reports.size() << " sections -> " << out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entity-labeled topic modeling pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> endpoint;
  std::optional<std::string> format;
  bool offline = false;
  std::string mode = "standard";

  app.add_option("--config", config_path, "pipeline configuration file")
      ->required();
  app.add_option("--seed", seed, "override both inference seeds");
  app.add_option("--endpoint", endpoint, "override the annotation endpoint");
  app.add_flag("--offline", offline, "use the gazetteer linker only");
  app.add_option("--format", format, "report format: markdown|csv|jsonl");

  auto* ingest = app.add_subcommand("ingest", "load, normalize and index the corpus");
  auto* link = app.add_subcommand("link", "annotate documents with entities");
  auto* label = app.add_subcommand("label", "rank entities and select labels");
  auto* train = app.add_subcommand("train", "run topic inference");
  train->add_option("--mode", mode, "standard|labeled")->required();
  auto* report = app.add_subcommand("report", "emit the comparison report");
  auto* pipeline = app.add_subcommand("pipeline", "run every stage in order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    PipelineConfig config = load_pipeline_config(config_path);
    if (seed) {
      config.standard.seed = *seed;
      config.labeled.seed = *seed;
    }
    if (endpoint) config.endpoint = *endpoint;
    if (offline) config.offline = true;
    if (format) config.report_format = *format;
    validate_config(config);
    std::string config_hash = hash_file(config_path);

    if (ingest->parsed()) cmd_ingest(config, config_hash);
    if (link->parsed()) cmd_link(config, config_hash);
    if (label->parsed()) cmd_label(config, config_hash);
    if (train->parsed()) cmd_train(config, config_hash, mode);
    if (report->parsed()) cmd_report(config, config_hash);
    if (pipeline->parsed()) {
      cmd_ingest(config, config_hash);
      cmd_link(config, config_hash);
      cmd_label(config, config_hash);
      cmd_train(config, config_hash, "standard");
      cmd_train(config, config_hash, "labeled");
      cmd_report(config, config_hash);
    }
    return kExitOk;
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const RemoteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitService;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
