#include "sixlayer/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sixlayer/classify.hpp"
#include "sixlayer/codec.hpp"
#include "sixlayer/error.hpp"
#include "sixlayer/query.hpp"
#include "sixlayer/rules.hpp"
#include "sixlayer/taxonomy.hpp"

namespace sixlayer::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write \"" + path + "\"");
  out << content;
  if (!out) throw Error(ErrorKind::Io, "write failed for \"" + path + "\"");
}

void emit(const std::string& out_path, const std::string& content, std::ostream& out) {
  if (out_path.empty())
    out << content;
  else
    write_file(out_path, content);
}

Scenario load_scenario(const std::string& path) {
  try {
    return parse_scenario(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), path + ": " + e.what());
  }
}

// Split file names: x.6lm.json -> x.6lm-static.json / x.6lm-dyn.json
std::string sibling_name(const std::string& path, const std::string& suffix) {
  static const std::string kExt = ".6lm.json";
  std::string stem = path;
  if (stem.size() >= kExt.size() && stem.compare(stem.size() - kExt.size(), kExt.size(), kExt) == 0)
    stem.resize(stem.size() - kExt.size());
  else if (auto dot = stem.rfind(".json"); dot != std::string::npos && dot + 5 == stem.size())
    stem.resize(dot);
  return stem + suffix;
}

struct Common {
  std::string taxonomy_path;
  std::string format = "text";
};

class Context {
 public:
  Context(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

  const Taxonomy& taxonomy(const std::string& flag_path) {
    std::string path = flag_path;
    if (path.empty())
      if (const char* env = std::getenv(kTaxonomyEnv)) path = env;
    if (path.empty()) return default_taxonomy();
    loaded_ = load_taxonomy(read_file(path));
    return *loaded_;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  std::optional<Taxonomy> loaded_;
};

// ---------------------------------------------------------------------------

struct ValidateOptions {
  std::vector<std::string> paths;
  std::string taxonomy;
  std::string config;
  std::string format = "text";
  bool strict = false;
  std::string layers;
};

struct FileReport {
  std::string path;
  std::string failure;
  std::vector<Diagnostic> diagnostics;
};

int cmd_validate(const ValidateOptions& o, Context& ctx) {
  const Taxonomy& taxonomy = ctx.taxonomy(o.taxonomy);
  RuleConfig config = o.config.empty() ? RuleConfig{} : load_rule_config(read_file(o.config));
  std::optional<LayerSet> only;
  if (!o.layers.empty()) only = LayerSet::parse_csv(o.layers);

  std::vector<std::future<FileReport>> jobs;
  for (const auto& path : o.paths) {
    jobs.push_back(std::async(std::launch::async, [&, path] {
      FileReport r{path, {}, {}};
      try {
        Scenario s = load_scenario(path);
        for (auto& d : validate(s, taxonomy, config)) {
          if (only && !only->contains(s.find(d.subject.entity)->layer)) continue;
          r.diagnostics.push_back(std::move(d));
        }
      } catch (const Error& e) {
        r.failure = e.what();
      }
      return r;
    }));
  }
  std::vector<FileReport> reports;
  for (auto& j : jobs) reports.push_back(j.get());

  bool failed = false;
  bool errors = false;
  bool warnings = false;
  nlohmann::json combined = nlohmann::json::object();
  for (const auto& r : reports) {
    if (!r.failure.empty()) {
      ctx.err() << "error: " << r.failure << "\n";
      failed = true;
      continue;
    }
    int n_err = 0, n_warn = 0, n_info = 0;
    for (const auto& d : r.diagnostics) {
      n_err += d.severity == Severity::Error;
      n_warn += d.severity == Severity::Warning;
      n_info += d.severity == Severity::Info;
    }
    errors |= n_err > 0;
    warnings |= n_warn > 0;
    if (o.format == "json") {
      if (reports.size() == 1)
        ctx.out() << diagnostics_to_json(r.diagnostics);
      else
        combined[r.path] = nlohmann::json::parse(diagnostics_to_json(r.diagnostics));
    } else {
      if (reports.size() > 1) ctx.out() << "== " << r.path << "\n";
      for (const auto& d : r.diagnostics) ctx.out() << format_diagnostic(d) << "\n";
      ctx.out() << r.path << ": " << n_err << " errors, " << n_warn << " warnings, " << n_info << " info\n";
    }
  }
  if (o.format == "json" && reports.size() > 1) ctx.out() << combined.dump(2) << "\n";
  if (failed) return kUsageOrFailure;
  if (errors || (o.strict && warnings)) return kFindings;
  return kOk;
}

struct ClassifyOptions {
  std::string path;
  std::string taxonomy;
  std::string format = "text";
  bool strict = false;
  bool rationale = false;
};

int cmd_classify(const ClassifyOptions& o, Context& ctx) {
  const Taxonomy& taxonomy = ctx.taxonomy(o.taxonomy);
  Scenario s = load_scenario(o.path);
  auto rows = classify_scenario(s, taxonomy);
  bool disagreement = false;
  if (o.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json steps = nlohmann::json::array();
      for (const auto& st : r.suggestion.rationale)
        steps.push_back({{"step", st.step}, {"text", st.text}, {"anchor", st.anchor}});
      arr.push_back({{"entity", r.entity},
                     {"stored_layer", r.stored_layer.value()},
                     {"suggested_layer", r.suggestion.layer.value()},
                     {"agrees", r.agrees},
                     {"rationale", std::move(steps)}});
      disagreement |= !r.agrees;
    }
    ctx.out() << arr.dump(2) << "\n";
  } else {
    std::size_t width = 6;
    for (const auto& r : rows) width = std::max(width, r.entity.size());
    ctx.out() << std::left << std::setw(static_cast<int>(width + 2)) << "entity"
              << "stored  suggested  status\n";
    for (const auto& r : rows) {
      ctx.out() << std::left << std::setw(static_cast<int>(width + 2)) << r.entity << std::setw(8)
                << r.stored_layer.value() << std::setw(11) << r.suggestion.layer.value()
                << (r.agrees ? "agree" : "DISAGREE") << "\n";
      if (o.rationale) ctx.out() << format_rationale(r.suggestion);
      disagreement |= !r.agrees;
    }
    std::size_t agree = 0;
    for (const auto& r : rows) agree += r.agrees;
    ctx.out() << agree << "/" << rows.size() << " entities agree\n";
  }
  return (disagreement && o.strict) ? kFindings : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sixlayer: layered traffic-environment description toolkit"};
  app.name("sixlayer");
  app.require_subcommand(1);

  Context ctx(out, err);
  std::function<int()> action;

  ValidateOptions vo;
  auto* validate_cmd = app.add_subcommand("validate", "Check scenarios against the layer guidelines");
  validate_cmd->add_option("paths", vo.paths, "Scenario files")->required();
  validate_cmd->add_option("--taxonomy", vo.taxonomy, "Taxonomy file");
  validate_cmd->add_option("--config", vo.config, "Rule configuration file");
  validate_cmd->add_option("--format", vo.format)->check(CLI::IsMember({"text", "json"}));
  validate_cmd->add_flag("--strict", vo.strict, "Warnings also fail");
  validate_cmd->add_option("--layers", vo.layers, "Report only entities on these layers (CSV)");
  validate_cmd->callback([&] { action = [&] { return cmd_validate(vo, ctx); }; });

  ClassifyOptions co;
  auto* classify_cmd = app.add_subcommand("classify", "Compare stored layers with suggested layers");
  classify_cmd->add_option("path", co.path, "Scenario file")->required();
  classify_cmd->add_option("--taxonomy", co.taxonomy, "Taxonomy file");
  classify_cmd->add_option("--format", co.format)->check(CLI::IsMember({"text", "json"}));
  classify_cmd->add_flag("--strict", co.strict, "Disagreements fail");
  classify_cmd->add_flag("--rationale", co.rationale, "Print the decision chain per entity");
  classify_cmd->callback([&] { action = [&] { return cmd_classify(co, ctx); }; });

  std::string path, path_b, out_path, layers_csv, format = "text";
  double at = 0.0;

  auto* project_cmd = app.add_subcommand("project", "Restrict a scenario to a layer subset");
  project_cmd->add_option("path", path)->required();
  project_cmd->add_option("--layers", layers_csv, "Layers to keep (CSV)")->required();
  project_cmd->add_option("--out", out_path, "Output file (default stdout)");
  project_cmd->callback([&] {
    action = [&] {
      LayerSet keep = LayerSet::parse_csv(layers_csv);
      emit(out_path, serialize_scenario(project(load_scenario(path), keep)), out);
      return kOk;
    };
  });

  auto* scene_cmd = app.add_subcommand("scene", "Evaluate a scenario at one timestamp");
  scene_cmd->add_option("path", path)->required();
  scene_cmd->add_option("--at", at, "Seconds from scenario start")->required();
  scene_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  scene_cmd->callback([&] {
    action = [&] {
      Scene scene = scene_at(load_scenario(path), at);
      out << (format == "json" ? scene_to_json(scene) : scene_to_text(scene));
      return kOk;
    };
  });

  auto* diff_cmd = app.add_subcommand("diff", "Per-layer differences between two scenarios");
  diff_cmd->add_option("a", path)->required();
  diff_cmd->add_option("b", path_b)->required();
  diff_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  diff_cmd->callback([&] {
    action = [&] {
      DiffReport report = diff(load_scenario(path), load_scenario(path_b));
      out << (format == "json" ? diff_to_json(report) : diff_to_text(report));
      return kOk;
    };
  });

  std::string static_out, dyn_out;
  auto* split_cmd = app.add_subcommand("split", "Write static (layers 1-3) and dynamic (4-6) documents");
  split_cmd->add_option("path", path)->required();
  split_cmd->add_option("--static-out", static_out);
  split_cmd->add_option("--dyn-out", dyn_out);
  split_cmd->callback([&] {
    action = [&] {
      auto [st, dy] = split(load_scenario(path));
      std::string sp = static_out.empty() ? sibling_name(path, ".6lm-static.json") : static_out;
      std::string dp = dyn_out.empty() ? sibling_name(path, ".6lm-dyn.json") : dyn_out;
      write_file(sp, serialize_static(st));
      write_file(dp, serialize_dynamic(dy));
      out << sp << "\n" << dp << "\n";
      return kOk;
    };
  });

  auto* merge_cmd = app.add_subcommand("merge", "Recombine static and dynamic documents");
  merge_cmd->add_option("static", path)->required();
  merge_cmd->add_option("dynamic", path_b)->required();
  merge_cmd->add_option("--out", out_path, "Output file (default stdout)");
  merge_cmd->callback([&] {
    action = [&] {
      Scenario s = merge(parse_static(read_file(path)), parse_dynamic(read_file(path_b)));
      emit(out_path, serialize_scenario(s), out);
      return kOk;
    };
  });

  std::string rule;
  auto* explain_cmd = app.add_subcommand("explain", "Print the guideline behind a rule id");
  explain_cmd->add_option("rule", rule)->required();
  explain_cmd->callback([&] {
    action = [&] {
      out << explain(rule);
      return kOk;
    };
  });

  std::vector<std::string> fmt_paths;
  bool fmt_check = false;
  auto* fmt_cmd = app.add_subcommand("fmt", "Rewrite scenario files in canonical form");
  fmt_cmd->add_option("paths", fmt_paths)->required();
  fmt_cmd->add_flag("--check", fmt_check, "Only report files that are not canonical");
  fmt_cmd->callback([&] {
    action = [&] {
      int status = kOk;
      for (const auto& p : fmt_paths) {
        std::string original = read_file(p);
        std::string canonical = serialize_scenario(load_scenario(p));
        if (canonical == original) continue;
        if (fmt_check) {
          out << p << ": not canonical\n";
          status = kFindings;
        } else {
          write_file(p, canonical);
        }
      }
      return status;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageOrFailure;
  }

  try {
    return action ? action() : kUsageOrFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageOrFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageOrFailure;
  }
}

}  // namespace sixlayer::cli
