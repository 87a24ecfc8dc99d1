#ifndef ELLDA_CONFIG_HPP
#define ELLDA_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "ellda/sampler.hpp"

namespace ellda {

struct PipelineConfig {
  // [paths]
  std::string corpus_dir;
  std::string manifest;
  std::string stopwords;
  std::string gazetteer;
  std::string blocklist;
  std::string cache_dir = "cache";
  std::string output_dir = "out";
  // [ingest]
  int min_count = 1;
  // [linking]
  std::string endpoint;
  bool offline = true;
  double min_confidence = 0.1;
  double max_doc_fraction = 0.8;
  std::string spotlight_support;  // pass-through, may be empty
  std::string spotlight_types;
  int max_concurrent_requests = 4;
  // [labels]
  int label_k = 5;
  // [standard] / [labeled]
  int standard_topics = 300;
  InferenceConfig standard;
  InferenceConfig labeled;
  // [report]
  double report_threshold = 0.10;
  std::string report_format = "markdown";
  int words_per_topic = 20;
};

// INI-style sections of key = value lines; '#' and ';' comments.
// ELLDA_ENDPOINT and ELLDA_CACHE_DIR environment variables override their
// config fields. Unknown keys are fatal (they are almost always typos).
PipelineConfig load_pipeline_config(const std::string& path);

// Range/type validation beyond parsing; throws naming the offending field.
void validate_config(const PipelineConfig& config);

// FNV-1a over the file bytes, as fixed-width hex.
std::string hash_file(const std::string& path);
std::string hash_bytes(const std::string& bytes);

// Sidecar run-metadata record for a stage artifact.
struct ArtifactMeta {
  std::string config_hash;
  std::string upstream_hash;  // hash of the input artifact, empty for ingest
  std::uint64_t seed = 0;
  std::string timestamp;  // RFC3339, informational only
};

void save_artifact_meta(const ArtifactMeta& meta, const std::string& artifact_path);
std::optional<ArtifactMeta> load_artifact_meta(const std::string& artifact_path);

}  // namespace ellda

#endif
