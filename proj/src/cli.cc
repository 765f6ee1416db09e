// Copyright 2026 The GIMC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gimc/cli.h"

#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gimc/checkpoint.h"
#include "gimc/common.h"
#include "gimc/contrastive.h"
#include "gimc/corpus.h"
#include "gimc/embedding_cache.h"
#include "gimc/gradcheck.h"
#include "gimc/graph.h"
#include "gimc/metrics.h"
#include "gimc/model.h"
#include "gimc/phrases.h"
#include "gimc/synthetic.h"
#include "gimc/trainer.h"
#include "json.hpp"

namespace gimc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kGradcheckTolerance = 1e-4;

struct Globals {
  uint64_t seed = 13;
  int dim = 32;
  bool verbose = false;
};

struct Options {
  Globals global;
  std::string doc_path;
  std::string corpus_dir;
  std::string cache_path;
  std::string model_path;
  std::string out_path;
  std::vector<std::string> dict_paths;
  std::vector<std::string> targets;
  std::vector<std::string> languages = {"en"};
  std::string source = "en";
  bool as_json = false;
  int nodes = 12;

  ModelConfig model;
  TrainConfig train;
  SyntheticSpec synthetic;
};

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const std::string& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::string tagged_text(const std::vector<std::string>& tokens, const std::array<Span, 2>& events) {
  return join_tokens(insert_event_tags(tokens, {events[0], events[1]}).tokens);
}

DictionaryList load_dictionaries(const std::vector<std::string>& paths) {
  DictionaryList out;
  for (const std::string& p : paths) out.push_back(load_dictionary(p));
  return out;
}

std::unique_ptr<EmbeddingCache> maybe_cache(const std::string& path, ModelConfig& model) {
  if (path.empty()) return nullptr;
  auto cache = std::make_unique<EmbeddingCache>(EmbeddingCache::read(path));
  model.encoder.mode = EncoderMode::kCache;
  model.encoder.dim_in = static_cast<int>(cache->dim_in());
  return cache;
}

json model_config_json(const ModelConfig& m) {
  return {{"encoder", m.encoder.mode == EncoderMode::kToy ? "toy" : "cache"},
          {"dim", m.encoder.dim},
          {"dim_in", m.encoder.dim_in},
          {"hash_buckets", m.encoder.hash_buckets},
          {"layers", m.layers},
          {"heads", m.heads},
          {"leaky_slope", m.leaky_slope},
          {"pregraph_statement", m.pregraph_statement}};
}

json train_config_json(const TrainConfig& t) {
  return {{"lr", t.lr},
          {"epochs", t.epochs},
          {"seed", t.seed},
          {"beta1", t.adamw.beta1},
          {"beta2", t.adamw.beta2},
          {"eps", t.adamw.eps},
          {"weight_decay", t.adamw.weight_decay},
          {"positives", t.contrastive.n_positives},
          {"negatives", t.contrastive.k_negatives},
          {"temperature", t.contrastive.temperature},
          {"normalize", t.contrastive.normalize},
          {"raw_dot", t.contrastive.raw_dot},
          {"contrastive", t.use_contrastive},
          {"clip_norm", t.clip_norm}};
}

void add_model_flags(CLI::App* sub, Options& o) {
  sub->add_option("--layers", o.model.layers, "GATv2 layers")->capture_default_str();
  sub->add_option("--heads", o.model.heads, "attention heads per layer")->capture_default_str();
  sub->add_option("--dim-in", o.model.encoder.dim_in, "toy embedding width")->capture_default_str();
  sub->add_option("--hash-buckets", o.model.encoder.hash_buckets, "toy vocabulary hash size")
      ->capture_default_str();
  sub->add_flag("--pregraph-statement", o.model.pregraph_statement,
                "classifier reads the encoder statement vector, not the graph node");
  sub->add_option("--cache", o.cache_path, "embedding cache (switches to cache encoder)");
}

void add_contrastive_flags(CLI::App* sub, Options& o) {
  ContrastiveConfig& c = o.train.contrastive;
  sub->add_option("--positives", c.n_positives, "code-switched positives per anchor")
      ->capture_default_str();
  sub->add_option("--negatives", c.k_negatives, "negatives per anchor")->capture_default_str();
  sub->add_option("--temperature", c.temperature, "similarity temperature")->capture_default_str();
  sub->add_flag("--no-normalize{false}", c.normalize, "dot products without L2 normalization");
  sub->add_flag("--raw-dot", c.raw_dot, "literal dot-product similarity");
}

int cmd_ingest_validate(const Options& o, std::ostream& out) {
  std::vector<Document> docs;
  if (fs::is_directory(o.doc_path)) {
    docs = load_corpus(o.doc_path);
  } else {
    docs.push_back(load_document(o.doc_path));
  }
  std::unique_ptr<EmbeddingCache> cache;
  if (!o.cache_path.empty()) cache = std::make_unique<EmbeddingCache>(EmbeddingCache::read(o.cache_path));
  json report = json::array();
  for (const Document& d : docs) {
    size_t tokens = 0;
    for (const Sentence& s : d.sentences) tokens += s.size();
    json j = {{"id", d.id},
              {"language", d.language},
              {"sentences", d.sentences.size()},
              {"tokens", tokens},
              {"events", d.events.size()},
              {"gold_pairs", d.gold_pairs.size()},
              {"candidate_pairs", candidate_pairs(d).size()},
              {"non_projective", has_non_projective_sentence(d)}};
    if (cache) {
      for (const std::string& key : required_cache_keys(d)) {
        if (cache->find(key) == nullptr) throw DataError("missing cache key '" + key + "'");
      }
      int present = 0;
      const auto optional = optional_cache_keys(d);
      for (const std::string& key : optional) present += cache->find(key) != nullptr;
      j["cache_statement_keys"] = std::to_string(present) + "/" + std::to_string(optional.size());
    }
    report.push_back(std::move(j));
  }
  out << json{{"documents", report}, {"valid", true}}.dump(2) << "\n";
  return kExitOk;
}

int cmd_extract_phrases(const Options& o, std::ostream& out) {
  const Document doc = load_document(o.doc_path);
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    for (const InformativePhrase& p : extract_phrases(doc.sentences[s], static_cast<int>(s))) {
      out << s << '\t' << p.role << "\t[" << p.start << ", " << p.end << ")\t"
          << phrase_text(p, doc.sentences[s]) << '\n';
    }
  }
  return kExitOk;
}

int cmd_build_graph(const Options& o, std::ostream& out) {
  const Document doc = load_document(o.doc_path);
  const DocumentInputs inputs = prepare_inputs(doc, o.model.encoder);
  out << graph_stats(build_topology(inputs)).to_json().dump(2) << "\n";
  return kExitOk;
}

int cmd_augment(const Options& o, std::ostream& out) {
  const Document doc = load_document(o.doc_path);
  const DictionaryList dicts = load_dictionaries(o.dict_paths);
  if (dicts.empty()) throw UsageError("augment needs --dicts");
  const DocumentInputs inputs = prepare_inputs(doc, o.model.encoder);
  Rng rng = document_rng(o.global.seed, doc.id, 0);
  const AnchorSampling sampling = build_anchor_sets(inputs, dicts, o.train.contrastive,
                                                    o.model.encoder.hash_buckets, rng);
  json anchors = json::array();
  for (const AnchorSet& set : sampling.sets) {
    const Statement& st = inputs.statements[static_cast<size_t>(set.anchor)];
    json a = {{"pair", {st.pair.first, st.pair.second}},
              {"statement", tagged_text(st.tokens, st.events)}};
    a["positives"] = json::array();
    for (const SampledStatement& p : set.positives) {
      a["positives"].push_back(tagged_text(p.tokens, p.events));
    }
    a["negatives"] = json::array();
    for (const SampledStatement& n : set.negatives) {
      const EventPair& pair = inputs.pairs[static_cast<size_t>(n.pair_index)].pair;
      a["negatives"].push_back({{"pair", {pair.first, pair.second}},
                                {"switched", n.switched},
                                {"text", tagged_text(n.tokens, n.events)}});
    }
    anchors.push_back(std::move(a));
  }
  out << json{{"document", doc.id}, {"seed", o.global.seed}, {"anchors", anchors},
              {"skipped_anchors", sampling.skipped}}
             .dump(2)
      << "\n";
  return kExitOk;
}

int cmd_gradcheck(const Options& o, std::ostream& out) {
  const GradcheckReport gat = gradcheck_gat(o.global.seed, o.nodes);
  const GradcheckReport model = gradcheck_model(o.global.seed, gradcheck_model_config());
  out << "# gatv2 stack, " << o.nodes << " nodes\n";
  for (const auto& [name, e] : gat.errors) out << name << '\t' << e << '\n';
  out << "# full model, helicopter fixture\n";
  for (const auto& [name, e] : model.errors) out << name << '\t' << e << '\n';
  const double worst = std::max(gat.max_error(), model.max_error());
  out << "max_relative_error\t" << worst << '\n';
  if (!(worst < kGradcheckTolerance)) {
    throw NumericError("gradient check failed: max relative error " + std::to_string(worst));
  }
  return kExitOk;
}

int cmd_train(Options& o, std::ostream& out, std::ostream& err) {
  ModelConfig model = o.model;
  auto cache = maybe_cache(o.cache_path, model);
  const Corpus corpus = load_corpus(o.corpus_dir);
  const DictionaryList dicts = load_dictionaries(o.dict_paths);
  const TrainResult result = train(corpus, dicts, model, o.train, &out, cache.get());
  ModelParams params = result.params;
  save_checkpoint(params, o.out_path);
  if (o.global.verbose) err << "wrote " << o.out_path << " after " << result.steps << " steps\n";
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  ModelParams params = load_checkpoint(o.model_path);
  std::unique_ptr<EmbeddingCache> cache;
  if (!o.cache_path.empty()) cache = std::make_unique<EmbeddingCache>(EmbeddingCache::read(o.cache_path));
  const MetricsReport m = evaluate(params, load_corpus(o.corpus_dir), cache.get());
  if (o.as_json) {
    out << metrics_to_json(m).dump(2) << "\n";
  } else {
    std::ostringstream line;
    line << std::fixed << std::setprecision(1) << "P " << round1(m.precision) << "\tR "
         << round1(m.recall) << "\tF " << round1(m.f1) << "\ttp " << m.tp << "\tfp " << m.fp
         << "\tfn " << m.fn << "\n";
    out << line.str();
  }
  return kExitOk;
}

int cmd_cross_eval(const Options& o, std::ostream& out) {
  ModelParams params = load_checkpoint(o.model_path);
  std::vector<std::pair<std::string, Corpus>> targets;
  for (const std::string& t : o.targets) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == t.size()) {
      throw UsageError("--targets entries must look like lang=DIR, got '" + t + "'");
    }
    targets.emplace_back(t.substr(0, eq), load_corpus(t.substr(eq + 1)));
  }
  const CrossLingualReport r = run_cross_lingual(params, o.source, targets);
  out << emit_report(r, o.as_json ? "json" : "markdown");
  return kExitOk;
}

int cmd_gen_synthetic(Options& o, std::ostream& out) {
  o.synthetic.seed = o.global.seed;
  o.synthetic.languages = o.languages;
  const SyntheticCorpus corpus = generate_synthetic(o.synthetic);
  write_synthetic(corpus, o.out_path);
  json summary = {{"out", o.out_path}, {"dictionaries", corpus.dictionaries.size()}};
  for (const auto& [lang, docs] : corpus.corpora) summary["documents"][lang] = docs.size();
  out << summary.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Heterogeneous graph interaction model for cross-lingual event causality"};
  app.name("gimc");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.global.seed, "random seed")->capture_default_str();
  app.add_option("--dim", o.global.dim, "model width")->capture_default_str();
  app.add_flag("--verbose", o.global.verbose, "extra diagnostics on stderr");

  auto* ingest = app.add_subcommand("ingest-validate", "validate documents (and a cache)");
  ingest->add_option("path", o.doc_path, "document file or corpus directory")->required();
  ingest->add_option("--cache", o.cache_path, "embedding cache to check for key coverage");

  auto* phrases = app.add_subcommand("extract-phrases", "print informative phrases");
  phrases->add_option("doc", o.doc_path, "document file")->required();

  auto* graph = app.add_subcommand("build-graph", "print heterogeneous graph statistics");
  graph->add_option("doc", o.doc_path, "document file")->required();

  auto* augment = app.add_subcommand("augment", "print contrastive anchors and samples");
  augment->add_option("doc", o.doc_path, "document file")->required();
  augment->add_option("--dicts", o.dict_paths, "bilingual dictionaries")->delimiter(',')->required();
  add_contrastive_flags(augment, o);

  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient check");
  gradcheck->add_option("--nodes", o.nodes, "nodes in the random attention graph")
      ->capture_default_str();

  auto* train_cmd = app.add_subcommand("train", "train a model");
  train_cmd->add_option("--corpus", o.corpus_dir, "training corpus directory")->required();
  train_cmd->add_option("--dicts", o.dict_paths, "bilingual dictionaries")->delimiter(',');
  train_cmd->add_option("--out", o.out_path, "checkpoint path")->required();
  train_cmd->add_option("--epochs", o.train.epochs, "training epochs")->capture_default_str();
  train_cmd->add_option("--lr", o.train.lr, "initial learning rate")->capture_default_str();
  train_cmd->add_option("--beta1", o.train.adamw.beta1)->capture_default_str();
  train_cmd->add_option("--beta2", o.train.adamw.beta2)->capture_default_str();
  train_cmd->add_option("--eps", o.train.adamw.eps)->capture_default_str();
  train_cmd->add_option("--weight-decay", o.train.adamw.weight_decay)->capture_default_str();
  train_cmd->add_option("--clip-norm", o.train.clip_norm, "global gradient norm cap, 0 = off")
      ->capture_default_str();
  train_cmd->add_flag("--no-contrastive{false}", o.train.use_contrastive,
                      "train with the classification loss only");
  add_model_flags(train_cmd, o);
  add_contrastive_flags(train_cmd, o);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a corpus");
  eval_cmd->add_option("--model", o.model_path, "checkpoint")->required();
  eval_cmd->add_option("--corpus", o.corpus_dir, "corpus directory")->required();
  eval_cmd->add_option("--cache", o.cache_path, "embedding cache for cache-mode models");
  eval_cmd->add_flag("--json", o.as_json, "machine-readable output");

  auto* cross = app.add_subcommand("cross-eval", "zero-shot cross-lingual evaluation");
  cross->add_option("--model", o.model_path, "checkpoint")->required();
  cross->add_option("--targets", o.targets, "lang=DIR list")->delimiter(',')->required();
  cross->add_option("--source", o.source, "source language of the model")->capture_default_str();
  cross->add_flag("--json", o.as_json, "JSON instead of a markdown table");

  auto* gen = app.add_subcommand("gen-synthetic", "write a planted-cue synthetic corpus");
  gen->add_option("--out", o.out_path, "output directory")->required();
  gen->add_option("--languages", o.languages, "language codes")->delimiter(',')->capture_default_str();
  gen->add_option("--docs", o.synthetic.docs_per_language, "documents per language")
      ->capture_default_str();
  gen->add_option("--events", o.synthetic.events_per_doc, "events per document")
      ->capture_default_str();
  gen->add_option("--cue-strength", o.synthetic.cue_strength, "probability of the planted cue")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gimc: " << e.what() << "\n";
    return kExitUsage;
  }

  o.model.encoder.dim = o.global.dim;
  o.train.seed = o.global.seed;
  CLI::App* sub = app.get_subcommands().front();
  json resolved = {{"command", sub->get_name()}, {"seed", o.global.seed}};
  if (sub == train_cmd) {
    resolved["model"] = model_config_json(o.model);
    resolved["train"] = train_config_json(o.train);
  }
  err << "# config " << resolved.dump() << "\n";

  try {
    if (sub == ingest) return cmd_ingest_validate(o, out);
    if (sub == phrases) return cmd_extract_phrases(o, out);
    if (sub == graph) return cmd_build_graph(o, out);
    if (sub == augment) return cmd_augment(o, out);
    if (sub == gradcheck) return cmd_gradcheck(o, out);
    if (sub == train_cmd) return cmd_train(o, out, err);
    if (sub == eval_cmd) return cmd_eval(o, out);
    if (sub == cross) return cmd_cross_eval(o, out);
    if (sub == gen) return cmd_gen_synthetic(o, out);
  } catch (const UsageError& e) {
    err << "gimc: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "gimc: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericError& e) {
    err << "gimc: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "gimc: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace gimc
