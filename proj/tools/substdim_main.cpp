#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "substdim/besicovitch.hpp"
#include "substdim/classify.hpp"
#include "substdim/errors.hpp"
#include "substdim/language.hpp"
#include "substdim/report.hpp"

namespace {

using substdim::json;

struct CommonOptions {
  std::string rules;
  std::string input_path;
  std::string output_path;
  std::string format = "json";
  std::uint64_t budget = 0;
  std::size_t finiteness_cutoff = 0;
  std::size_t window = std::size_t{1} << 16;
  std::size_t samples = 512;
  double nu_min = 1.0 / 512;
  double nu_max = 0.5;
  long seed = 0;
  bool with_empirical = false;
  bool with_ifs = false;
  std::size_t language_length = 0;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool positional_rules) {
  if (positional_rules)
    cmd->add_option("rules", opt.rules, "substitution rules, e.g. \"0 -> 01 ; 1 -> 00\"");
  cmd->add_option("--in", opt.input_path, "input file");
  cmd->add_option("--out", opt.output_path, "output file (default stdout)");
  cmd->add_option("--format", opt.format, "output format: json, csv, text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_option("--budget", opt.budget, "power budget: cap on |θ'|^k (default 2^48)");
  cmd->add_option("--finiteness-cutoff", opt.finiteness_cutoff,
                  "Morse-Hedlund cutoff N (default 4·|A|²·|θ|²)");
  cmd->add_option("--window", opt.window, "window radius n for empirical estimates");
  cmd->add_option("--samples", opt.samples, "orbit sample count");
  cmd->add_option("--nu-min", opt.nu_min, "smallest separation scale");
  cmd->add_option("--nu-max", opt.nu_max, "largest separation scale");
  cmd->add_option("--seed", opt.seed, "seed for randomized utilities (echoed)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw substdim::ParseError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

substdim::Substitution load_substitution(const CommonOptions& opt) {
  std::string text = opt.rules;
  if (text.empty() && !opt.input_path.empty()) text = read_file(opt.input_path);
  if (text.empty())
    throw substdim::ParseError("no substitution given (rules argument or --in)");
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return substdim::substitution_from_json(json::parse(text));
  return substdim::parse_substitution(text);
}

json config_echo(const CommonOptions& opt) {
  json cfg;
  cfg["budget"] = opt.budget ? opt.budget : (std::uint64_t{1} << 48);
  cfg["finiteness_cutoff"] = opt.finiteness_cutoff;  // 0 = auto
  cfg["window"] = opt.window;
  cfg["samples"] = opt.samples;
  cfg["nu_min"] = opt.nu_min;
  cfg["nu_max"] = opt.nu_max;
  cfg["seed"] = opt.seed;
  cfg["format"] = opt.format;
  return cfg;
}

void emit(const CommonOptions& opt, const std::string& payload) {
  if (opt.output_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(opt.output_path, std::ios::binary);
    out << payload;
    if (!payload.empty() && payload.back() != '\n') out << '\n';
  }
}

substdim::ClassifyConfig classify_config(const CommonOptions& opt) {
  substdim::ClassifyConfig cfg;
  cfg.finiteness_cutoff = opt.finiteness_cutoff;
  cfg.power_budget = opt.budget;
  return cfg;
}

substdim::EmpiricalConfig empirical_config(const CommonOptions& opt) {
  substdim::EmpiricalConfig cfg;
  cfg.window_radius = opt.window;
  cfg.sample_count = opt.samples;
  cfg.nu_min = opt.nu_min;
  cfg.nu_max = opt.nu_max;
  return cfg;
}

std::string classification_text(const substdim::ClassificationReport& report) {
  std::ostringstream out;
  out << "verdict: " << substdim::to_string(report.verdict) << '\n';
  if (report.bounds.exact) {
    out << "ac = " << substdim::json_number(*report.bounds.exact).dump() << '\n';
  } else {
    out << "ac in [" << report.bounds.lower << ", " << report.bounds.upper << "]\n";
  }
  return out.str();
}

std::string classification_csv(const substdim::ClassificationReport& report) {
  std::ostringstream out;
  out << "verdict,lower,upper,exact\n"
      << substdim::to_string(report.verdict) << ','
      << substdim::json_number(report.bounds.lower).dump() << ','
      << substdim::json_number(report.bounds.upper).dump() << ',';
  if (report.bounds.exact)
    out << substdim::json_number(*report.bounds.exact).dump();
  out << '\n';
  return out.str();
}

int run_analyze(const CommonOptions& opt, const std::string& command) {
  const auto theta = load_substitution(opt);
  const auto report = substdim::classify(theta, classify_config(opt));
  json doc = substdim::make_report_document(command, theta, report, config_echo(opt));
  if (opt.with_empirical) {
    const auto fit = substdim::empirical_ac(theta, empirical_config(opt));
    doc["empirical"] = substdim::dimension_fit_to_json(fit);
  }
  if (opt.format == "text")
    emit(opt, classification_text(report));
  else if (opt.format == "csv")
    emit(opt, classification_csv(report));
  else
    emit(opt, doc.dump(2));
  return 0;
}

int run_empirical(const CommonOptions& opt) {
  const auto theta = load_substitution(opt);
  const auto cfg = empirical_config(opt);
  const auto fit = substdim::empirical_ac(theta, cfg);
  if (opt.format == "csv") {
    std::ostringstream out;
    out << "nu,count\n";
    for (std::size_t t = 0; t < fit.table.nu_grid.size(); ++t)
      out << fit.table.nu_grid[t] << ',' << fit.table.counts[t] << '\n';
    emit(opt, out.str());
    return 0;
  }
  json doc;
  doc["tool"] = "substdim";
  doc["version"] = substdim::kToolVersion;
  doc["schema_version"] = substdim::kSchemaVersion;
  doc["command"] = "empirical";
  doc["substitution"] = substdim::substitution_to_json(theta);
  doc["config"] = config_echo(opt);
  doc["empirical"] = substdim::dimension_fit_to_json(fit);
  if (opt.with_ifs) {
    const auto sample =
        substdim::sample_orbit(theta, cfg.sample_count, cfg.window_radius);
    doc["ifs"] = substdim::ifs_report_to_json(substdim::ifs_checks(theta, sample));
  }
  emit(opt, doc.dump(2));
  return 0;
}

int run_language(const CommonOptions& opt) {
  const auto theta = load_substitution(opt);
  if (opt.language_length == 0)
    throw substdim::PreconditionError("--length must be >= 1");
  const auto lang = substdim::language(theta, opt.language_length);
  if (opt.format == "text" || opt.format == "csv") {
    std::ostringstream out;
    for (const auto& w : lang.words)
      out << substdim::format_word(theta.alphabet, w) << '\n';
    emit(opt, out.str());
    return 0;
  }
  json doc;
  doc["n"] = lang.n;
  doc["count"] = lang.words.size();
  json words = json::array();
  for (const auto& w : lang.words)
    words.push_back(substdim::format_word(theta.alphabet, w));
  doc["words"] = std::move(words);
  emit(opt, doc.dump(2));
  return 0;
}

json error_object(const std::string& type, const std::string& message) {
  return json{{"error", {{"type", type}, {"message", message}}}};
}

int run_batch(const CommonOptions& opt) {
  if (opt.input_path.empty())
    throw substdim::ParseError("batch requires --in FILE");
  const std::string text = read_file(opt.input_path);

  std::vector<std::string> records;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    for (const auto& item : json::parse(text))
      records.push_back(item.is_string() ? item.get<std::string>() : item.dump());
  } else {
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == '#') continue;
      records.push_back(line);
    }
  }

  json reports = json::array();
  std::map<std::string, std::size_t> verdict_counts;
  std::map<std::string, std::size_t> exact_histogram;
  for (const auto& record : records) {
    CommonOptions rec_opt = opt;
    rec_opt.rules = record;
    rec_opt.input_path.clear();
    try {
      const auto theta = load_substitution(rec_opt);
      const auto report = substdim::classify(theta, classify_config(opt));
      json doc = substdim::make_report_document("batch", theta, report,
                                                config_echo(opt));
      verdict_counts[substdim::to_string(report.verdict)]++;
      if (report.verdict == substdim::Verdict::DiscreteInfinite &&
          report.bounds.exact)
        exact_histogram[json(*report.bounds.exact).dump()]++;
      reports.push_back(std::move(doc));
    } catch (const substdim::ParseError& e) {
      reports.push_back(error_object("parse", e.what()));
      verdict_counts["Error"]++;
    } catch (const substdim::PreconditionError& e) {
      reports.push_back(error_object("precondition", e.what()));
      verdict_counts["Error"]++;
    } catch (const substdim::UndecidedError& e) {
      reports.push_back(error_object("undecided", e.what()));
      verdict_counts["Error"]++;
    }
  }

  json doc;
  doc["tool"] = "substdim";
  doc["version"] = substdim::kToolVersion;
  doc["schema_version"] = substdim::kSchemaVersion;
  doc["command"] = "batch";
  doc["config"] = config_echo(opt);
  doc["reports"] = std::move(reports);
  json summary;
  summary["total"] = records.size();
  summary["verdicts"] = verdict_counts;
  summary["exact_ac_histogram"] = exact_histogram;
  doc["summary"] = std::move(summary);
  emit(opt, doc.dump(2));
  return 0;
}

int run_verify(const CommonOptions& opt) {
  std::string text;
  if (!opt.input_path.empty())
    text = read_file(opt.input_path);
  else
    throw substdim::ParseError("verify requires --in FILE");
  const json doc = json::parse(text);
  const auto result = substdim::verify_document(doc);
  json out;
  out["ok"] = result.ok;
  out["checks"] = result.checks;
  out["failures"] = result.failures;
  emit(opt, out.dump(2));
  return result.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classification and amorphic-complexity bounds for primitive "
               "constant-length substitution subshifts"};
  app.require_subcommand(1);

  CommonOptions opt;
  auto* analyze = app.add_subcommand("analyze", "full trichotomy pipeline");
  add_common_flags(analyze, opt, true);
  analyze->add_flag("--empirical", opt.with_empirical,
                    "attach the empirical dimension estimate");

  auto* bounds = app.add_subcommand("bounds", "amorphic-complexity bounds only");
  add_common_flags(bounds, opt, true);

  auto* empirical =
      app.add_subcommand("empirical", "box-dimension estimate on the Besicovitch space");
  add_common_flags(empirical, opt, true);
  empirical->add_flag("--ifs", opt.with_ifs, "attach IFS geometry diagnostics");

  auto* language = app.add_subcommand("language", "length-n factors of X_θ");
  add_common_flags(language, opt, true);
  language->add_option("--length,-n", opt.language_length, "factor length")
      ->required();

  auto* batch = app.add_subcommand("batch", "classify every record of a corpus file");
  add_common_flags(batch, opt, false);

  auto* verify = app.add_subcommand("verify", "replay certificates of a report");
  add_common_flags(verify, opt, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return run_analyze(opt, "analyze");
    if (bounds->parsed()) return run_analyze(opt, "bounds");
    if (empirical->parsed()) return run_empirical(opt);
    if (language->parsed()) return run_language(opt);
    if (batch->parsed()) return run_batch(opt);
    if (verify->parsed()) return run_verify(opt);
  } catch (const substdim::ParseError& e) {
    std::cout << error_object("parse", e.what()).dump(2) << '\n';
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const substdim::PreconditionError& e) {
    std::cout << error_object("precondition", e.what()).dump(2) << '\n';
    std::cerr << "precondition error: " << e.what() << '\n';
    return 3;
  } catch (const substdim::UndecidedError& e) {
    std::cout << error_object("undecided", e.what()).dump(2) << '\n';
    std::cerr << "undecided: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cout << error_object("internal", e.what()).dump(2) << '\n';
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
