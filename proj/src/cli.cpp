// Copyright 2026 The mateval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mateval/cli.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mateval/baseline.hpp"
#include "mateval/correlation.hpp"
#include "mateval/http_client.hpp"
#include "mateval/model_client.hpp"
#include "mateval/report.hpp"
#include "mateval/sample_io.hpp"
#include "mateval/scoring.hpp"
#include "mateval/validation.hpp"

namespace mateval {

namespace fs = std::filesystem;

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

void require_dir(const fs::path& p, const char* flag) {
  if (p.empty()) throw UsageError(std::string(flag) + " is required");
  if (!fs::is_directory(p)) {
    throw UsageError(std::string(flag) + ": not a directory: " + p.string());
  }
}

void require_file(const fs::path& p, const char* flag) {
  if (p.empty()) throw UsageError(std::string(flag) + " is required");
  if (!fs::is_regular_file(p)) {
    throw UsageError(std::string(flag) + ": no such file: " + p.string());
  }
}

std::vector<fs::path> subdirectories(const fs::path& root) {
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

// Runs task(i) for i in [0, n) with at most `jobs` in flight.
void for_each_bounded(std::size_t n, std::size_t jobs,
                      const std::function<void(std::size_t)>& task) {
  jobs = std::max<std::size_t>(1, jobs);
  for (std::size_t begin = 0; begin < n; begin += jobs) {
    const std::size_t end = std::min(n, begin + jobs);
    std::vector<std::future<void>> batch;
    for (std::size_t i = begin; i < end; ++i)
      batch.push_back(std::async(std::launch::async, task, i));
    for (auto& f : batch) f.get();
  }
}

std::string pretty(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::vector<double> read_scores(const fs::path& path) {
  const std::string text = read_file(path);
  const auto j = nlohmann::json::parse(text, nullptr, false);
  std::vector<double> out;
  if (!j.is_discarded() && j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) throw Error(path.string() + ": non-numeric score");
      out.push_back(v.get<double>());
    }
    return out;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t start = text.find_first_not_of(" \t\r\n,", i);
    if (start == std::string::npos) break;
    std::size_t stop = text.find_first_of(" \t\r\n,", start);
    if (stop == std::string::npos) stop = text.size();
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data() + start, text.data() + stop, v);
    if (ec != std::errc() || ptr != text.data() + stop) {
      throw Error(path.string() + ": non-numeric score '" +
                  text.substr(start, stop - start) + "'");
    }
    out.push_back(v);
    i = stop;
  }
  return out;
}

}  // namespace

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_dir(cfg.gold_dir, "--gold");
  require_dir(cfg.pred_dir, "--pred");
  const std::vector<fs::path> papers = subdirectories(cfg.gold_dir);
  const MetricOptions opts = cfg.switches.metric();

  std::vector<std::optional<PaperScore>> scores(papers.size());
  std::vector<std::string> errors(papers.size());
  for_each_bounded(papers.size(), cfg.jobs, [&](std::size_t i) {
    const std::string id = papers[i].filename().string();
    try {
      const PaperRecord gold = load_paper(papers[i], cfg.domain);
      const fs::path pred_path = cfg.pred_dir / id;
      const PaperRecord pred = fs::is_directory(pred_path)
                                   ? load_paper(pred_path, cfg.domain)
                                   : PaperRecord{id, cfg.domain, {}};
      scores[i] = score_paper(pred, gold, opts);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::vector<PaperScore> ok;
  std::vector<PaperFailure> failures;
  for (std::size_t i = 0; i < papers.size(); ++i) {
    if (scores[i]) {
      ok.push_back(std::move(*scores[i]));
    } else {
      failures.push_back({papers[i].filename().string(), errors[i]});
    }
  }
  CorpusReport report;
  if (!ok.empty()) report = aggregate(std::move(ok), cfg.switches.aggregation);
  report.fingerprint = fingerprint(cfg.switches);
  report.failures = std::move(failures);
  for (const auto& d : subdirectories(cfg.pred_dir)) {
    if (!fs::is_directory(cfg.gold_dir / d.filename())) {
      report.warnings.push_back("predicted paper '" + d.filename().string() +
                                "' has no gold counterpart; ignored");
    }
  }
  if (papers.empty()) report.warnings.push_back("gold corpus has no papers");

  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  for (const auto& f : report.failures)
    err << "error: " << f.paper_id << ": " << f.message << "\n";
  const std::string table = report_to_table(report);
  out << table;
  if (!cfg.out_dir.empty()) {
    write_file(cfg.out_dir / "report.json", pretty(report_to_json(report)));
    write_file(cfg.out_dir / "report.csv", table);
  }
  return report.failures.empty() ? kExitOk : kExitData;
}

int cmd_baseline(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_dir(cfg.validation_dir, "--validation");
  require_dir(cfg.pred_dir, "--pred");
  if (cfg.out_dir.empty()) throw UsageError("--out is required");
  const std::vector<PaperRecord> validation =
      load_corpus(cfg.validation_dir, cfg.domain);
  if (validation.empty()) throw Error("validation corpus is empty");
  const BaselineProfile profile = build_profile(validation, cfg.domain);
  const std::vector<PaperRecord> preds = load_corpus(cfg.pred_dir, cfg.domain);

  fs::create_directories(cfg.out_dir);
  write_file(cfg.out_dir / "baseline_profile.json",
             pretty(profile_to_json(profile)));
  std::size_t samples = 0;
  for (const auto& p : preds) {
    BaselineExpansion ex =
        expand_with_baseline(p, profile, cfg.switches.rounding);
    for (const auto& w : ex.warnings)
      err << "warning: " << p.paper_id << ": " << w << "\n";
    samples += ex.paper.samples.size();
    write_paper(cfg.out_dir, ex.paper);
  }
  out << "baseline: " << preds.size() << " papers, " << samples
      << " samples written to " << cfg.out_dir.string() << "\n";
  return kExitOk;
}

int cmd_extract(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_dir(cfg.docs_dir, "--docs");
  if (cfg.out_dir.empty()) throw UsageError("--out is required");
  const bool scripted = !cfg.transcript_file.empty();
  if (scripted == !cfg.clients_file.empty()) {
    throw UsageError("exactly one of --transcript or --clients is required");
  }

  std::vector<std::string> channels = {"text"};
  if (cfg.mode == PipelineMode::kTextPlusImages) channels.push_back("vision");
  if (cfg.deplot) channels.push_back("chart");

  std::shared_ptr<const Transcript> transcript;
  std::map<std::string, std::unique_ptr<ModelClient>> live;
  if (scripted) {
    require_file(cfg.transcript_file, "--transcript");
    transcript = std::make_shared<const Transcript>(
        Transcript::load(cfg.transcript_file));
  } else {
    require_file(cfg.clients_file, "--clients");
    const auto configs = load_client_configs(cfg.clients_file);
    for (const auto& ch : channels) {
      const auto it = configs.find(ch);
      if (it == configs.end()) {
        throw UsageError("clients config has no '" + ch + "' client");
      }
      try {
        live[ch] = std::make_unique<HttpChatClient>(it->second);
      } catch (const ContractError& e) {
        throw UsageError(e.what());
      }
    }
  }

  PipelineConfig pcfg = PipelineConfig::defaults(cfg.domain);
  pcfg.mode = cfg.mode;
  pcfg.deplot_substitution = cfg.deplot;

  const std::vector<fs::path> docs = subdirectories(cfg.docs_dir);
  std::vector<int> codes(docs.size(), kExitOk);
  std::vector<std::string> messages(docs.size());
  for_each_bounded(docs.size(), cfg.jobs, [&](std::size_t i) {
    const std::string id = docs[i].filename().string();
    try {
      const DocumentBundle doc = load_document_bundle(docs[i]);
      std::map<std::string, std::unique_ptr<ModelClient>> scoped;
      PipelineClients clients;
      auto pick = [&](const std::string& ch) -> ModelClient* {
        if (std::find(channels.begin(), channels.end(), ch) == channels.end())
          return nullptr;
        if (!scripted) return live.at(ch).get();
        scoped[ch] = std::make_unique<TranscriptClient>(transcript, ch, id);
        return scoped[ch].get();
      };
      clients.text = pick("text");
      clients.vision = pick("vision");
      clients.chart = pick("chart");
      const PipelineResult r = run_pipeline(doc, pcfg, clients);
      write_paper(cfg.out_dir, r.record ? *r.record
                                        : PaperRecord{id, cfg.domain, {}});
      write_file(cfg.out_dir / id / "manifest.json",
                 pretty(manifest_to_json(r.manifest)));
      if (!r.record) {
        codes[i] = kExitUpstream;
        messages[i] = r.manifest.failed_stage + ": " + r.manifest.error;
      }
    } catch (const std::exception& e) {
      codes[i] = kExitData;
      messages[i] = e.what();
    }
  });

  int code = kExitOk;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (codes[i] == kExitOk) {
      ++ok;
    } else {
      err << "error: " << docs[i].filename().string() << ": " << messages[i]
          << "\n";
    }
    code = std::max(code, codes[i]);
  }
  out << "extract: " << ok << "/" << docs.size() << " papers ("
      << to_string(cfg.mode) << (cfg.deplot ? ", deplot" : "") << ")\n";
  return code;
}

int cmd_correlate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_file(cfg.human_file, "--human");
  require_file(cfg.auto_file, "--auto");
  const std::vector<double> human = read_scores(cfg.human_file);
  const std::vector<double> automated = read_scores(cfg.auto_file);
  if (human.size() != automated.size()) {
    throw Error("score columns differ in length (" +
                std::to_string(human.size()) + " vs " +
                std::to_string(automated.size()) + ")");
  }
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["n"] = human.size();
  j["seed"] = cfg.seed;
  j["permutations"] = cfg.permutations;
  for (auto [kind, name] : {std::pair{CorrelationKind::kPearson, "pearson"},
                            std::pair{CorrelationKind::kSpearman, "spearman"}}) {
    const CorrelationResult r =
        correlate(automated, human, kind, cfg.permutations, cfg.seed);
    j[name] = {{"coefficient", r.coefficient}, {"p_value", r.p_value}};
  }
  (void)err;
  out << pretty(j);
  if (!cfg.out_dir.empty()) write_file(cfg.out_dir / "correlation.json", pretty(j));
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const fs::path root = !cfg.gold_dir.empty() ? cfg.gold_dir : cfg.pred_dir;
  require_dir(root, "--gold or --pred");
  std::size_t bad = 0, papers = 0;
  for (const auto& dir : subdirectories(root)) {
    ++papers;
    const std::string id = dir.filename().string();
    try {
      const PaperRecord p = load_paper(dir, cfg.domain);
      for (const auto& v : validate_paper(p)) {
        ++bad;
        err << id << ": sample " << v.sample_index;
        if (v.curve_index) err << ", curve " << *v.curve_index;
        err << ": " << v.message << "\n";
      }
    } catch (const Error& e) {
      ++bad;
      err << id << ": " << e.what() << "\n";
    }
  }
  out << "validate: " << papers << " papers, " << bad << " problems\n";
  return bad == 0 ? kExitOk : kExitData;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Extraction and evaluation of materials data from papers",
               "mateval"};
  app.require_subcommand(1);

  std::string domain = "pnc", mode = "t-only", header_join = "concat",
              curve_norm = "frobenius", agg = "macro", rounding = "half-up";
  auto add_domain = [&](CLI::App* sub) {
    sub->add_option("--domain", domain, "pnc or pbd")
        ->check(CLI::IsMember({"pnc", "pbd"}))
        ->capture_default_str();
  };
  auto add_jobs = [&](CLI::App* sub) {
    sub->add_option("--jobs", cfg.jobs, "papers processed concurrently")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  auto* evaluate = app.add_subcommand("evaluate", "score predictions against gold");
  evaluate->add_option("--gold", cfg.gold_dir, "gold corpus directory")->required();
  evaluate->add_option("--pred", cfg.pred_dir, "prediction corpus directory")->required();
  evaluate->add_option("--out", cfg.out_dir, "write report.json and report.csv here");
  add_domain(evaluate);
  add_jobs(evaluate);
  evaluate->add_option("--header-join", header_join)
      ->check(CLI::IsMember({"concat", "mean"}))
      ->capture_default_str();
  evaluate->add_option("--curve-norm", curve_norm)
      ->check(CLI::IsMember({"frobenius", "bbox"}))
      ->capture_default_str();
  evaluate->add_option("--agg", agg)
      ->check(CLI::IsMember({"macro", "micro"}))
      ->capture_default_str();

  auto* baseline = app.add_subcommand("baseline", "majority-vote property baseline");
  baseline->add_option("--validation", cfg.validation_dir, "validation corpus")->required();
  baseline->add_option("--pred", cfg.pred_dir, "text-only prediction corpus")->required();
  baseline->add_option("--out", cfg.out_dir, "expanded prediction corpus")->required();
  add_domain(baseline);
  baseline->add_option("--rounding", rounding)
      ->check(CLI::IsMember({"half-up", "half-even"}))
      ->capture_default_str();

  auto* extract = app.add_subcommand("extract", "run the extraction pipeline");
  extract->add_option("--docs", cfg.docs_dir, "document bundles, one directory per paper")->required();
  extract->add_option("--out", cfg.out_dir, "prediction corpus")->required();
  add_domain(extract);
  add_jobs(extract);
  extract->add_option("--mode", mode)
      ->check(CLI::IsMember({"t-only", "t+img"}))
      ->capture_default_str();
  extract->add_flag("--deplot", cfg.deplot, "replace figures with chart tables");
  extract->add_option("--clients", cfg.clients_file, "live clients config");
  extract->add_option("--transcript", cfg.transcript_file, "scripted responses");

  auto* corr = app.add_subcommand("correlate", "correlate automated scores with human ratings");
  corr->add_option("--human", cfg.human_file, "human ratings")->required();
  corr->add_option("--auto", cfg.auto_file, "automated scores")->required();
  corr->add_option("--out", cfg.out_dir, "write correlation.json here");
  corr->add_option("--seed", cfg.seed)->capture_default_str();
  corr->add_option("--permutations", cfg.permutations)->capture_default_str();

  auto* validate = app.add_subcommand("validate", "check a corpus against the schema");
  validate->add_option("--gold", cfg.gold_dir, "corpus directory");
  validate->add_option("--pred", cfg.pred_dir, "corpus directory");
  add_domain(validate);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  cfg.domain = *parse_domain(domain);
  cfg.mode = mode == "t+img" ? PipelineMode::kTextPlusImages
                             : PipelineMode::kTextOnly;
  cfg.switches.header_join = *parse_header_join(header_join);
  cfg.switches.curve_norm = *parse_curve_norm(curve_norm);
  cfg.switches.aggregation = *parse_aggregation(agg);
  cfg.switches.rounding = *parse_rounding(rounding);

  try {
    if (evaluate->parsed()) return cmd_evaluate(cfg, out, err);
    if (baseline->parsed()) return cmd_baseline(cfg, out, err);
    if (extract->parsed()) return cmd_extract(cfg, out, err);
    if (corr->parsed()) return cmd_correlate(cfg, out, err);
    return cmd_validate(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UpstreamError& e) {
    err << "upstream error: " << e.what() << "\n";
    return kExitUpstream;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace mateval
