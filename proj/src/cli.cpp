#include "topex/cli.hpp"

#include "topex/aggregate.hpp"
#include "topex/attribution.hpp"
#include "topex/compare.hpp"
#include "topex/error.hpp"
#include "topex/fileio.hpp"
#include "topex/lda.hpp"
#include "topex/lexicon.hpp"
#include "topex/log.hpp"
#include "topex/membership.hpp"
#include "topex/random.hpp"
#include "topex/report.hpp"
#include "topex/shapley.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace topex::cli {

namespace {

namespace fs = std::filesystem;

struct LdaArgs {
  std::size_t topics = 30;
  double alpha = 5.0;
  double beta = 0.01;
  std::string alpha_mode = "total";
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
  std::size_t stopwords_k = 100;
};

void add_lda_options(CLI::App* cmd, LdaArgs& lda) {
  cmd->add_option("-T,--topics", lda.topics, "Number of LDA topics")
      ->capture_default_str()->check(CLI::Range(2, 65535));
  cmd->add_option("--alpha", lda.alpha, "Document-topic Dirichlet concentration")
      ->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--alpha-mode", lda.alpha_mode,
                  "total: alpha is split evenly over topics (alpha/T each); per-topic: each topic gets alpha")
      ->capture_default_str()->check(CLI::IsMember({"total", "per-topic"}));
  cmd->add_option("--beta", lda.beta, "Topic-word Dirichlet concentration")
      ->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--iterations", lda.iterations, "Gibbs sweeps")
      ->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--seed", lda.seed, "Random seed")->capture_default_str();
  cmd->add_option("--stopwords-k", lda.stopwords_k,
                  "Drop the k most frequent corpus words before training (0 keeps all)")
      ->capture_default_str();
}

std::string read_input(const std::string& path) { return read_file(fs::path(path)); }

TopicModel train_from_corpus(const std::string& corpus_path, const LdaArgs& lda) {
  std::istringstream in(read_input(corpus_path));
  auto corpus = read_corpus(in);
  LdaOptions options;
  options.num_topics = lda.topics;
  options.alpha = lda.alpha;
  options.beta = lda.beta;
  options.alpha_mode = lda.alpha_mode == "per-topic" ? AlphaMode::kPerTopic : AlphaMode::kTotal;
  options.iterations = lda.iterations;
  options.seed = lda.seed;
  if (lda.stopwords_k > 0) {
    auto [vocab, counts] = build_vocabulary(std::span<const std::vector<Word>>(corpus));
    options.stopwords = compute_stopwords(counts, lda.stopwords_k);
  }
  return lda_train(corpus, options);
}

void insert_lda_config(std::map<std::string, std::string>& config, const LdaArgs& lda) {
  config["lda.topics"] = std::to_string(lda.topics);
  config["lda.alpha"] = format_double(lda.alpha);
  config["lda.alpha_mode"] = lda.alpha_mode;
  config["lda.beta"] = format_double(lda.beta);
  config["lda.iterations"] = std::to_string(lda.iterations);
  config["lda.seed"] = std::to_string(lda.seed);
  config["lda.stopwords_k"] = std::to_string(lda.stopwords_k);
}

// ---------------------------------------------------------------- attribute

struct AttributeArgs {
  std::string model;
  std::string sentences;
  std::string mode = "exact";
  std::uint64_t samples = 2000;
  std::uint64_t seed = 0;
  std::string class_label = "positive";
  std::string id_prefix = "s";
  std::string output;
};

void cmd_attribute(const AttributeArgs& args) {
  std::istringstream model_in(read_input(args.model));
  ToyModel model = ToyModel::from_json(model_in, args.model);

  std::istringstream lines(read_input(args.sentences));
  std::vector<std::pair<std::string, std::vector<std::string>>> sentences;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    auto tokens = split_whitespace(line);
    if (tokens.empty()) continue;
    if (args.mode == "exact" && tokens.size() > kMaxExactPlayers) {
      throw ValidationError("sentence has " + std::to_string(tokens.size()) +
                                " tokens; exact mode handles at most " +
                                std::to_string(kMaxExactPlayers) + " (use --mode sampled)",
                            args.sentences, line_no);
    }
    sentences.emplace_back(args.id_prefix + std::to_string(line_no), std::move(tokens));
  }

  Rng seeds(args.seed);
  std::vector<InstanceAttribution> out;
  for (const auto& [id, tokens] : sentences) {
    if (args.mode == "exact") {
      out.push_back(attribute_exact(model, tokens, id, args.class_label));
    } else {
      out.push_back(attribute_sampled(model, tokens, id, args.class_label, args.samples, seeds.next()));
    }
  }
  std::ostringstream buffer;
  write_attributions(buffer, out);
  write_file_atomic(args.output, buffer.str());
  log::info("wrote " + std::to_string(out.size()) + " attribution records to " + args.output);
}

// ---------------------------------------------------------------- lda-train

struct LdaTrainArgs {
  std::string corpus;
  LdaArgs lda;
  std::size_t top_words = 15;
  std::string out_dir;
};

void cmd_lda_train(const LdaTrainArgs& args) {
  TopicModel model = train_from_corpus(args.corpus, args.lda);
  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  if (ec || !fs::is_directory(args.out_dir)) throw IoError("cannot create " + args.out_dir);
  std::ostringstream matrix;
  write_topic_matrix(matrix, model);
  write_file_atomic(fs::path(args.out_dir) / "topics.csv", matrix.str());
  std::ostringstream top;
  write_top_words(top, model, args.top_words);
  write_file_atomic(fs::path(args.out_dir) / "top_words.txt", top.str());
}

// ---------------------------------------------------------------- explain

struct ExplainArgs {
  std::string attributions;
  std::string lexicon;
  std::string topic_matrix;
  std::string corpus;
  LdaArgs lda;
  std::string scheme = "inverse-frequency";
  std::string path = "global-word";
  std::string class_label;
  std::string model_id = "model";
  std::string dataset_id = "dataset";
  bool lenient = false;
  std::string output;
};

void cmd_explain(const ExplainArgs& args) {
  int sources = !args.lexicon.empty() + !args.topic_matrix.empty() + !args.corpus.empty();
  if (sources != 1) {
    throw ValidationError("exactly one of --lexicon, --topic-matrix or --corpus is required");
  }
  const WeightingScheme scheme = parse_weighting_scheme(args.scheme);
  const AggregationPath path = parse_aggregation_path(args.path);

  std::istringstream in(read_input(args.attributions));
  IngestResult ingested = ingest_attributions(in, {args.lenient, args.attributions});
  for (const auto& msg : ingested.skipped) log::warn("skipped " + msg);

  std::string class_label = args.class_label;
  if (class_label.empty()) {
    std::set<std::string> classes;
    for (const auto& inst : ingested.instances) classes.insert(inst.class_label);
    if (classes.size() > 1) {
      throw ValidationError(args.attributions + " explains " + std::to_string(classes.size()) +
                            " classes; choose one with --class-label");
    }
    if (classes.size() == 1) class_label = *classes.begin();
  }
  auto instances = filter_by_class(ingested.instances, class_label);
  if (instances.empty()) {
    throw ValidationError("no instances in " + args.attributions + " for class \"" + class_label + "\"");
  }

  std::map<std::string, std::string> config;
  config["attributions"] = args.attributions;
  config["class_label"] = class_label;
  config["scheme"] = std::string(to_string(scheme));
  config["path"] = std::string(to_string(path));
  config["lenient"] = args.lenient ? "true" : "false";
  config["skipped_records"] = std::to_string(ingested.skipped.size());

  TopicMembership membership;
  if (!args.lexicon.empty()) {
    std::istringstream lex_in(read_input(args.lexicon));
    Lexicon lexicon = parse_lexicon(lex_in, args.lexicon);
    auto [vocab, counts] = build_vocabulary(instances);
    membership = lexicon_membership(lexicon, vocab);
    config["lexicon"] = args.lexicon;
  } else if (!args.topic_matrix.empty()) {
    std::istringstream tm_in(read_input(args.topic_matrix));
    membership = lda_membership(read_topic_matrix(tm_in, args.topic_matrix));
    config["topic_matrix"] = args.topic_matrix;
  } else {
    membership = lda_membership(train_from_corpus(args.corpus, args.lda));
    config["corpus"] = args.corpus;
    insert_lda_config(config, args.lda);
  }

  GlobalTopicExplanation explanation = explain(instances, membership, scheme, path);
  explanation.metadata.model_id = args.model_id;
  explanation.metadata.dataset_id = args.dataset_id;
  explanation.metadata.class_label = class_label;
  explanation.metadata.config = std::move(config);
  write_file_atomic(args.output, explanation_to_json(explanation));
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  std::string a;
  std::string b;
  std::size_t k = 3;
  std::vector<std::string> formats{"json", "csv", "svg", "text"};
  std::string out_dir;
  bool exclude_other = false;
  std::string topic_matrix;
  std::string lexicon;
};

void cmd_compare(const CompareArgs& args) {
  auto a = explanation_from_json(read_input(args.a), args.a);
  auto b = explanation_from_json(read_input(args.b), args.b);
  ComparisonReport report = compare_explanations(a, b, args.k, args.exclude_other);

  std::optional<TopicClouds> clouds;
  if (!args.topic_matrix.empty()) {
    std::istringstream in(read_input(args.topic_matrix));
    clouds = clouds_from_model(read_topic_matrix(in, args.topic_matrix));
  } else if (!args.lexicon.empty()) {
    std::istringstream in(read_input(args.lexicon));
    clouds = clouds_from_lexicon(parse_lexicon(in, args.lexicon));
  }
  std::set<ReportFormat> formats;
  for (const auto& f : args.formats) formats.insert(parse_report_format(f));
  render_report(report, clouds, formats, args.out_dir);
}

int exit_code(ExitCode code) { return static_cast<int>(code); }

}  // namespace

int run(int argc, char** argv) {
  log::init_from_env();
  CLI::App app{"Topic-level global explanations and model comparisons from token attributions.\n"
               "Log verbosity: TOPEX_LOG_LEVEL=debug|info|warn|error|off"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key-value config file; command-line flags override it");

  AttributeArgs attr;
  auto* attribute = app.add_subcommand("attribute", "Shapley attributions of a toy model on sentences");
  attribute->add_option("--model", attr.model, "Toy model JSON")->required();
  attribute->add_option("--sentences", attr.sentences, "One sentence per line, whitespace tokenized")
      ->required();
  attribute->add_option("--mode", attr.mode, "exact enumeration or sampled permutations")
      ->capture_default_str()->check(CLI::IsMember({"exact", "sampled"}));
  attribute->add_option("--samples", attr.samples, "Permutations per sentence in sampled mode")
      ->capture_default_str()->check(CLI::PositiveNumber);
  attribute->add_option("--seed", attr.seed, "Random seed for sampled mode")->capture_default_str();
  attribute->add_option("--class-label", attr.class_label, "Explained class written to each record")
      ->capture_default_str();
  attribute->add_option("--id-prefix", attr.id_prefix, "instance_id prefix (line number appended)")
      ->capture_default_str();
  attribute->add_option("-o,--output", attr.output, "Output JSONL")->required();

  LdaTrainArgs ldat;
  auto* lda_cmd = app.add_subcommand("lda-train", "Train an LDA topic model by collapsed Gibbs sampling");
  lda_cmd->add_option("--corpus", ldat.corpus, "One document per line")->required();
  add_lda_options(lda_cmd, ldat.lda);
  lda_cmd->add_option("--top-words", ldat.top_words, "Words listed per topic in top_words.txt")
      ->capture_default_str();
  lda_cmd->add_option("--out-dir", ldat.out_dir, "Writes topics.csv and top_words.txt here")->required();

  ExplainArgs expl;
  auto* explain_cmd = app.add_subcommand("explain", "Aggregate attributions into a topic explanation");
  explain_cmd->add_option("--attributions", expl.attributions, "Attribution JSONL")
      ->required();
  auto* lex_opt = explain_cmd->add_option("--lexicon", expl.lexicon, "LIWC-style .dic lexicon")
                      ;
  auto* tm_opt = explain_cmd->add_option("--topic-matrix", expl.topic_matrix, "Topic matrix CSV")
                     ;
  auto* corpus_opt = explain_cmd->add_option("--corpus", expl.corpus, "Train LDA on this corpus first")
                         ;
  lex_opt->excludes(tm_opt)->excludes(corpus_opt);
  tm_opt->excludes(corpus_opt);
  add_lda_options(explain_cmd, expl.lda);
  explain_cmd->add_option("--scheme", expl.scheme, "Word weighting C(w)")
      ->capture_default_str()->transform(CLI::IsMember({"sum", "inverse-frequency"}, CLI::ignore_case));
  explain_cmd->add_option("--path", expl.path, "Aggregation path")
      ->capture_default_str()->transform(CLI::IsMember({"global-word", "local-additive"}, CLI::ignore_case));
  explain_cmd->add_option("--class-label", expl.class_label,
                          "Explained class to keep (required when several are present)");
  explain_cmd->add_option("--model-id", expl.model_id, "Name of the explained model")->capture_default_str();
  explain_cmd->add_option("--dataset-id", expl.dataset_id, "Name of the dataset")->capture_default_str();
  explain_cmd->add_flag("--lenient", expl.lenient, "Skip invalid attribution records instead of failing");
  explain_cmd->add_option("-o,--output", expl.output, "Output explanation JSON")->required();

  CompareArgs cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Compare two topic explanations");
  compare_cmd->add_option("--a", cmp.a, "Explanation of model A")->required();
  compare_cmd->add_option("--b", cmp.b, "Explanation of model B")->required();
  compare_cmd->add_option("-k", cmp.k, "Rows per ranked table")->capture_default_str()->check(CLI::PositiveNumber);
  compare_cmd->add_option("--formats", cmp.formats, "Any of json, csv, svg, text")
      ->capture_default_str()->delimiter(',')->check(CLI::IsMember({"json", "csv", "svg", "text"}));
  compare_cmd->add_option("--out-dir", cmp.out_dir, "Output directory for report.*")->required();
  compare_cmd->add_flag("--exclude-other", cmp.exclude_other, "Leave OTHER out of the rankings");
  auto* cmp_tm = compare_cmd->add_option("--topic-matrix", cmp.topic_matrix, "Topic matrix for word clouds")
                     ;
  compare_cmd->add_option("--lexicon", cmp.lexicon, "Lexicon for word clouds")
      ->excludes(cmp_tm);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : exit_code(ExitCode::kValidation);
  }

  try {
    if (*attribute) {
      if (attr.mode == "exact" && attribute->count("--samples") > 0) {
        log::warn("--samples is ignored in exact mode");
      }
      cmd_attribute(attr);
    } else if (*lda_cmd) {
      cmd_lda_train(ldat);
    } else if (*explain_cmd) {
      cmd_explain(expl);
    } else if (*compare_cmd) {
      cmd_compare(cmp);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return exit_code(ExitCode::kInternal);
  }
  return 0;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("topex");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  argv.push_back(nullptr);
  return run(static_cast<int>(storage.size()), argv.data());
}

}  // namespace topex::cli
