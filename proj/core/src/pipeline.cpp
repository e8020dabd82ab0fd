#include "mvlabel/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <set>

#include "mvlabel/errors.hpp"
#include "mvlabel/labeling.hpp"
#include "mvlabel/serialize.hpp"
#include "mvlabel/text.hpp"
#include "mvlabel/validation.hpp"

namespace mvlabel {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base, const fs::path& p) {
  if (p.empty() || p.is_absolute()) return p;
  return (base / p).lexically_normal();
}

std::string fill_mode_name(ClinicalFillOptions::Mode mode) {
  return mode == ClinicalFillOptions::Mode::BackFill ? "backfill" : "none";
}

ClinicalFillOptions::Mode parse_fill_mode(const std::string& text) {
  if (text == "backfill") return ClinicalFillOptions::Mode::BackFill;
  if (text == "none") return ClinicalFillOptions::Mode::PassThrough;
  throw ConfigError("clinical_fill.mode must be 'backfill' or 'none', got '" + text + "'");
}

void reject_unknown(const Json& j, std::initializer_list<std::string_view> known,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

Json read_json(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw StageDependencyError("artifact '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json(const fs::path& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

template <typename F>
auto in_stage(const char* stage, const std::string& view, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const StageDependencyError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, view, e.what(), e.exit_code());
  } catch (const Json::exception& e) {
    throw StageError(stage, view, e.what(), ExitCode::Data);
  }
}

fs::path model_path(const RunConfig& c, const std::string& view) {
  return c.output_dir / "models" / (view + ".json");
}

Dataset read_dataset(const RunConfig& c) {
  return read_json(c.output_dir / "dataset.json").get<Dataset>();
}

struct StoredModel {
  ClusterModel model;
  NormalizationParams normalization;
  KSelectionTrace trace;
};

StoredModel read_model(const RunConfig& c, const std::string& view) {
  const Json j = read_json(model_path(c, view));
  return {j.at("model").get<ClusterModel>(), j.at("normalization").get<NormalizationParams>(),
          j.at("trace").get<KSelectionTrace>()};
}

PromptContext prompt_context(const Dataset& ds, const ViewSpec& view, const ClusterModel& model) {
  return {view.name, view.features, model.centers_original, view.sensor_context,
          ds.cohort_context};
}

void log(const PipelineHooks& hooks, const std::string& message) {
  if (hooks.log) hooks.log(message);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ClusterLabelSet label_view(LlmClient& client, const RunConfig& config, const Dataset& ds,
                           const ViewSpec& view, const ClusterModel& model,
                           std::vector<std::string>& warnings) {
  const int k = model.k;
  const std::string prompt = build_prompt(prompt_context(ds, view, model));
  ClusterLabelSet set;
  std::string raw;
  try {
    raw = client.request_labels(prompt, AuditTarget{config.output_dir, view.name});
    try {
      set = parse_labels(raw, k);
    } catch (const ParseError&) {
      raw = client.request_labels(prompt + format_reminder(k),
                                  AuditTarget{config.output_dir, view.name + ".retry"});
      set = parse_labels(raw, k);
    }
  } catch (const ParseError& e) {
    warnings.push_back("view '" + view.name + "': labels could not be parsed (" + e.what() +
                       "); using generic labels");
    set = generic_labels(view.name, k);
    set.raw_response = raw;
  } catch (const TransportError& e) {
    warnings.push_back("view '" + view.name + "': LLM request failed (" + e.what() +
                       "); using generic labels");
    set = generic_labels(view.name, k);
  } catch (const FixtureMissingError& e) {
    warnings.push_back("view '" + view.name + "': " + e.what() + "; using generic labels");
    set = generic_labels(view.name, k);
  }
  set.view_name = view.name;
  set.provider_model = config.llm.model;
  if (config.llm.mode == LlmMode::Live && !set.generic) set.provider_timestamp = utc_now();
  return set;
}

}  // namespace

void RunConfig::validate() const {
  if (dataset.empty()) throw ConfigError("config: 'dataset' is required");
  if (k_range.lo < 2 || k_range.hi > 50 || k_range.lo > k_range.hi)
    throw ConfigError("config: k_range must satisfy 2 <= lo <= hi <= 50, got [" +
                      std::to_string(k_range.lo) + ", " + std::to_string(k_range.hi) + "]");
  if (max_iter < 1) throw ConfigError("config: kmeans.max_iter must be at least 1");
  if (!(tol > 0.0)) throw ConfigError("config: kmeans.tol must be positive");
  if (clinical_scores.empty()) throw ConfigError("config: clinical_scores must not be empty");
  if (std::set(clinical_scores.begin(), clinical_scores.end()).size() != clinical_scores.size())
    throw ConfigError("config: clinical_scores has duplicates");
  if (clinical_fill.window_days < 1) throw ConfigError("config: clinical_fill.window_days < 1");
  if (min_rows < 2) throw ConfigError("config: min_rows must be at least 2");
  if (llm.mode == LlmMode::Fixture && llm.fixture_dir.empty())
    throw ConfigError("config: llm.fixture_dir is required in fixture mode");
  if (llm.mode == LlmMode::Live && llm.endpoint.empty())
    throw ConfigError("config: llm.endpoint is required in live mode");
  if (output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
}

RunConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
  RunConfig c;
  try {
    const Json j = Json::parse(json_text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"dataset", "registry", "clinical_scores", "seed", "k_range", "kmeans",
                    "normalization", "clinical_fill", "min_rows", "llm", "output_dir"},
                   "config");
    if (!j.contains("seed")) throw ConfigError("config: 'seed' is required");
    c.seed = j.at("seed").get<std::uint64_t>();
    c.dataset = resolve(base_dir, j.at("dataset").get<std::string>());
    if (j.contains("registry")) c.registry = resolve(base_dir, j.at("registry").get<std::string>());
    if (j.contains("clinical_scores")) j.at("clinical_scores").get_to(c.clinical_scores);
    if (j.contains("k_range")) {
      const auto r = j.at("k_range").get<std::vector<int>>();
      if (r.size() != 2) throw ConfigError("config: k_range must be [lo, hi]");
      c.k_range = {r[0], r[1]};
    }
    if (j.contains("kmeans")) {
      const auto& km = j.at("kmeans");
      reject_unknown(km, {"max_iter", "tol"}, "kmeans");
      if (km.contains("max_iter")) km.at("max_iter").get_to(c.max_iter);
      if (km.contains("tol")) km.at("tol").get_to(c.tol);
    }
    if (j.contains("normalization"))
      c.normalization = parse_normalization_mode(j.at("normalization").get<std::string>());
    if (j.contains("clinical_fill")) {
      const auto& f = j.at("clinical_fill");
      reject_unknown(f, {"mode", "window_days", "include_assessment_day"}, "clinical_fill");
      if (f.contains("mode")) c.clinical_fill.mode = parse_fill_mode(f.at("mode").get<std::string>());
      if (f.contains("window_days")) f.at("window_days").get_to(c.clinical_fill.window_days);
      if (f.contains("include_assessment_day"))
        f.at("include_assessment_day").get_to(c.clinical_fill.include_assessment_day);
    }
    if (j.contains("min_rows")) j.at("min_rows").get_to(c.min_rows);
    if (j.contains("llm")) {
      const auto& l = j.at("llm");
      reject_unknown(l, {"mode", "endpoint", "model", "fixture_dir"}, "llm");
      if (l.contains("mode")) c.llm.mode = parse_llm_mode(l.at("mode").get<std::string>());
      if (l.contains("endpoint")) l.at("endpoint").get_to(c.llm.endpoint);
      if (l.contains("model")) l.at("model").get_to(c.llm.model);
      if (l.contains("fixture_dir"))
        c.llm.fixture_dir = resolve(base_dir, l.at("fixture_dir").get<std::string>());
    }
    if (j.contains("output_dir"))
      c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
    else
      c.output_dir = resolve(base_dir, c.output_dir);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ConfigError("config file '" + path.string() + "' not found");
  return parse_config(read_file(path), path.parent_path());
}

std::string config_snapshot(const RunConfig& c, bool include_output_dir) {
  Json j = {
      {"dataset", c.dataset.generic_string()},
      {"registry", c.registry.generic_string()},
      {"clinical_scores", c.clinical_scores},
      {"seed", c.seed},
      {"k_range", {c.k_range.lo, c.k_range.hi}},
      {"kmeans", {{"max_iter", c.max_iter}, {"tol", c.tol}}},
      {"normalization", to_string(c.normalization)},
      {"clinical_fill",
       {{"mode", fill_mode_name(c.clinical_fill.mode)},
        {"window_days", c.clinical_fill.window_days},
        {"include_assessment_day", c.clinical_fill.include_assessment_day}}},
      {"min_rows", c.min_rows},
      {"llm",
       {{"mode", to_string(c.llm.mode)},
        {"endpoint", c.llm.endpoint},
        {"model", c.llm.model},
        {"fixture_dir", c.llm.fixture_dir.generic_string()}}},
  };
  if (include_output_dir) j["output_dir"] = c.output_dir.generic_string();
  return j.dump(2) + "\n";
}

void stage_ingest(const RunConfig& config) {
  in_stage("ingest", "", [&] {
    const ViewRegistry registry =
        config.registry.empty() ? default_registry() : load_registry(config.registry);
    for (const auto& s : config.clinical_scores)
      if (std::find(registry.clinical_scores.begin(), registry.clinical_scores.end(), s) ==
          registry.clinical_scores.end())
        throw ConfigError("clinical score '" + s + "' is not listed in the view registry");
    if (!fs::is_regular_file(config.dataset))
      throw ConfigError("dataset '" + config.dataset.string() + "' not found");
    const Dataset ds = load_dataset(config.dataset, registry);
    write_file(config.output_dir / "config.json", config_snapshot(config));
    write_json(config.output_dir / "dataset.json", ds);
  });
}

void stage_cluster(const RunConfig& config) {
  const Dataset ds = read_dataset(config);
  const KMeansOptions options{config.seed, config.max_iter, config.tol};
  std::vector<std::future<void>> pending;
  for (const auto& view : ds.views) {
    pending.push_back(std::async(std::launch::async, [&, &view = view] {
      in_stage("cluster", view.name, [&] {
        const FeatureMatrix fm = partition_view(ds, view, config.min_rows);
        const NormalizationParams params = fit_normalizer(fm, config.normalization);
        auto [model, trace] = select_k(normalize(fm, params), config.k_range, options);
        model.centers_original = denormalize_centers(model.centers_normalized, params);
        write_json(model_path(config, view.name),
                   Json{{"model", model}, {"normalization", params}, {"trace", trace}});
      });
    }));
  }
  std::exception_ptr first;
  for (auto& f : pending) {
    try {
      f.get();
    } catch (...) {
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

void stage_label(const RunConfig& config, const PipelineHooks& hooks) {
  const Dataset ds = read_dataset(config);
  LlmClientConfig cc;
  cc.mode = config.llm.mode;
  cc.endpoint = config.llm.endpoint;
  cc.model = config.llm.model;
  cc.fixture_dir = config.llm.fixture_dir;
  if (const char* key = std::getenv("LLM_API_KEY")) cc.api_key = key;
  LlmClient client(cc, hooks.transport, hooks.sleeper);

  Json sets = Json::array();
  std::vector<std::string> warnings;
  for (const auto& view : ds.views) {
    const ClusterModel model = read_model(config, view.name).model;
    in_stage("label", view.name, [&] {
      ClusterLabelSet set;
      if (config.llm.mode == LlmMode::Off) {
        set = generic_labels(view.name, model.k);
      } else {
        log(hooks, "labeling view '" + view.name + "'");
        set = label_view(client, config, ds, view, model, warnings);
      }
      sets.push_back(set);
    });
  }
  for (const auto& w : warnings) log(hooks, "warning: " + w);
  write_json(config.output_dir / "labels.json", Json{{"labels", sets}, {"warnings", warnings}});
}

void stage_validate(const RunConfig& config) {
  const Dataset ds = read_dataset(config);
  std::vector<ClusterModel> models;
  for (const auto& view : ds.views) models.push_back(read_model(config, view.name).model);

  in_stage("validate", "", [&] {
    const ClinicalTable clinical = extract_clinical(ds, config.clinical_fill);
    std::vector<ClusterClinicalSummary> summaries;
    for (const auto& model : models)
      summaries.push_back(in_stage("validate", model.view_name, [&] {
        return summarize_clinical(model, clinical, config.clinical_scores);
      }));
    const auto rows = build_significance_table(summaries, config.clinical_scores);
    std::vector<std::string> warnings;
    for (const auto& r : rows)
      if (!r.applicable())
        warnings.push_back("view '" + r.view_name + "', score '" + r.score +
                           "': no test applicable (" + r.note + ")");
    write_json(config.output_dir / "significance.json",
               Json{{"rows", rows}, {"summaries", summaries}, {"warnings", warnings}});
    write_file(config.output_dir / "significance.csv", render_csv(rows));
  });
}

RunReport stage_report(const RunConfig& config) {
  const Dataset ds = read_dataset(config);
  const Json labels = read_json(config.output_dir / "labels.json");
  const Json significance = read_json(config.output_dir / "significance.json");

  return in_stage("report", "", [&] {
    RunReport report;
    const std::string snapshot = config_snapshot(config, false);
    report.config_snapshot = snapshot;
    report.run_id = prompt_hash(snapshot + read_file(config.output_dir / "dataset.json"));

    const auto sets = labels.at("labels").get<std::vector<ClusterLabelSet>>();
    const auto summaries = significance.at("summaries").get<std::vector<ClusterClinicalSummary>>();
    report.significance = significance.at("rows").get<std::vector<SignificanceRow>>();

    std::vector<std::string> cluster_warnings;
    for (const auto& view : ds.views) {
      auto stored = read_model(config, view.name);
      ViewReport v;
      v.model = std::move(stored.model);
      v.trace = std::move(stored.trace);
      v.features = view.features;
      v.reference_k = view.reference_k;
      for (const auto& s : sets)
        if (s.view_name == view.name) v.labels = s;
      for (const auto& s : summaries)
        if (s.view_name == view.name) v.clinical = s;
      if (v.labels.view_name.empty() || v.clinical.view_name.empty())
        throw StageDependencyError("labels or clinical summary missing for view '" + view.name +
                                   "'");
      for (const auto& w : v.trace.warnings) cluster_warnings.push_back("view '" + view.name + "': " + w);
      if (v.reference_k && *v.reference_k != v.model.k)
        cluster_warnings.push_back("view '" + view.name + "': selected K = " +
                                   std::to_string(v.model.k) + ", reference K = " +
                                   std::to_string(*v.reference_k));
      report.views.push_back(std::move(v));
    }
    report.warnings = cluster_warnings;
    for (const auto& w : labels.value("warnings", std::vector<std::string>{}))
      report.warnings.push_back(w);
    for (const auto& w : significance.value("warnings", std::vector<std::string>{}))
      report.warnings.push_back(w);

    for (const auto& v : report.views) {
      std::vector<std::string> legend;
      for (int c = 0; c < v.model.k; ++c) {
        std::string name = "Cluster " + std::to_string(c + 1);
        for (const auto& l : v.labels.labels)
          if (l.cluster_index == c) name = l.name;
        legend.push_back(name);
      }
      try {
        write_file(config.output_dir / "charts" / (v.model.view_name + ".svg"),
                   render_bar_chart(v.clinical, legend));
      } catch (const ContractError& e) {
        report.warnings.push_back("view '" + v.model.view_name + "': no chart (" + e.what() + ")");
      }
    }
    write_file(config.output_dir / "report.md", render_markdown(report));
    return report;
  });
}

RunReport run_all(const RunConfig& config, const PipelineHooks& hooks) {
  config.validate();
  log(hooks, "ingest");
  stage_ingest(config);
  log(hooks, "cluster");
  stage_cluster(config);
  log(hooks, "label");
  stage_label(config, hooks);
  log(hooks, "validate");
  stage_validate(config);
  log(hooks, "report");
  return stage_report(config);
}

std::vector<std::pair<std::string, std::string>> pending_prompts(const RunConfig& config) {
  const Dataset ds = read_dataset(config);
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& view : ds.views) {
    const ClusterModel model = read_model(config, view.name).model;
    out.emplace_back(view.name, build_prompt(prompt_context(ds, view, model)));
  }
  return out;
}

SynthOutput write_synth(const SynthSpec& spec, const fs::path& csv_path) {
  const SynthData data = generate(spec);
  SynthOutput out;
  out.csv = csv_path;
  const fs::path stem = csv_path.parent_path() / csv_path.stem();
  out.registry = stem.string() + ".registry.json";
  out.planted = stem.string() + ".planted.json";

  if (!csv_path.parent_path().empty()) fs::create_directories(csv_path.parent_path());
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw ConfigError("cannot write '" + csv_path.string() + "'");
  write_dataset_csv(data.dataset, csv);
  csv.close();

  write_json(out.registry, data.registry);
  Json planted = {{"latent", data.latent}, {"views", data.planted}};
  write_json(out.planted, planted);
  return out;
}

SynthSpec load_synth_spec(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ConfigError("synth spec '" + path.string() + "' not found");
  SynthSpec spec;
  try {
    spec = Json::parse(read_file(path)).get<SynthSpec>();
  } catch (const Json::exception& e) {
    throw ConfigError("invalid synth spec '" + path.string() + "': " + e.what());
  }
  try {
    spec.validate();
  } catch (const ContractError& e) {
    throw ConfigError(std::string("invalid synth spec: ") + e.what());
  }
  return spec;
}

}  // namespace mvlabel
