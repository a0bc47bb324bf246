#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dco/dsl.hpp"
#include "dco/report.hpp"
#include "dco/xmi.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitInputError = 2;
constexpr int kExitBudget = 3;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Loads a scenario from .dco / .uml / .xmi, printing diagnostics to
// stderr on failure.
std::optional<dco::Scenario> load_scenario(const std::string& path,
                                           int loop_bound) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return std::nullopt;
  }
  if (ends_with(path, ".dco")) {
    dco::ParseResult result = dco::parse_scenario(*text);
    if (!result.ok()) {
      for (const auto& e : result.errors)
        std::cerr << path << ":" << e.span.line << ":" << e.span.column
                  << ": " << e.message << "\n";
      return std::nullopt;
    }
    return std::move(result.scenario);
  }
  if (ends_with(path, ".uml") || ends_with(path, ".xmi")) {
    dco::ImportResult result = dco::import_xmi(*text, loop_bound);
    for (const auto& w : result.warnings)
      std::cerr << path << ": warning: " << w << "\n";
    if (!result.ok()) {
      for (const auto& e : result.errors)
        std::cerr << path << ": " << e.element << ": " << e.message << "\n";
      return std::nullopt;
    }
    return std::move(result.scenario);
  }
  std::cerr << "error: unknown input format (expected .dco, .uml or .xmi): "
            << path << "\n";
  return std::nullopt;
}

std::optional<dco::PropertySelection> parse_properties(
    const std::string& spec) {
  dco::PropertySelection out{false, false, false, false};
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "valid") {
      out.valid = true;
    } else if (item == "controllability") {
      out.controllability = true;
    } else if (item == "observability") {
      out.observability = true;
    } else if (item == "coordination") {
      out.coordination = true;
    } else {
      std::cerr << "error: unknown property '" << item << "'\n";
      return std::nullopt;
    }
  }
  return out;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  out << content;
  return out.good();
}

int run_analyze(const std::string& file, const std::string& properties,
                int loop_bound, int max_coord, std::size_t budget,
                const std::string& format, const std::string& out_path) {
  auto selection = parse_properties(properties);
  if (!selection) return kExitInputError;
  auto scenario = load_scenario(file, loop_bound);
  if (!scenario) return kExitInputError;

  dco::Limits limits{loop_bound, budget};
  dco::AnalysisReport report;
  try {
    report = dco::analyze_scenario(*scenario, limits, *selection, max_coord);
  } catch (const dco::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  }

  std::string rendered = format == "json" ? dco::export_report_json(report)
                                          : dco::render_report(report);
  if (!out_path.empty()) {
    if (!write_file(out_path, rendered)) return kExitInputError;
  } else {
    std::cout << rendered;
  }

  if (report.coordination_status ==
      dco::AnalysisReport::CoordinationStatus::NotFound)
    return kExitBudget;
  return report.has_violations() ? kExitViolations : kExitOk;
}

int run_refine(const std::string& file, const std::string& out_path,
               int loop_bound, int max_coord, std::size_t budget) {
  auto scenario = load_scenario(file, loop_bound);
  if (!scenario) return kExitInputError;

  dco::Limits limits{loop_bound, budget};
  dco::SynthesisResult result;
  try {
    result = dco::synthesize_minimal_coordination(*scenario, limits,
                                                  max_coord);
  } catch (const dco::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  switch (result.status) {
    case dco::SynthesisResult::Status::AlreadySatisfied:
      std::cout << "Coordination Messages: none required\n";
      if (!write_file(out_path, dco::render_scenario(*scenario)))
        return kExitInputError;
      return kExitOk;
    case dco::SynthesisResult::Status::NotFound:
      std::cerr << "error: no coordination set of size <= " << max_coord
                << " enforces both properties\n";
      return kExitBudget;
    case dco::SynthesisResult::Status::Synthesized:
      break;
  }
  std::cout << "Coordination Messages: {";
  for (std::size_t i = 0; i < result.refined->added.size(); ++i) {
    if (i) std::cout << ", ";
    std::cout << dco::render_coordination(result.refined->added[i]);
  }
  std::cout << "}\n";
  if (!write_file(out_path, dco::render_scenario(result.refined->scenario)))
    return kExitInputError;
  return kExitOk;
}

int run_check(const std::string& file, int loop_bound, std::size_t budget) {
  auto scenario = load_scenario(file, loop_bound);
  if (!scenario) return kExitInputError;
  dco::Limits limits{loop_bound, budget};
  dco::PropertySelection selection{false, true, true, false};
  try {
    dco::AnalysisReport report =
        dco::analyze_scenario(*scenario, limits, selection);
    return report.has_violations() ? kExitViolations : kExitOk;
  } catch (const dco::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Analyzes message-sequence test scenarios for local controllability "
      "and local observability, and synthesizes minimal coordination "
      "messages that enforce both"};
  app.require_subcommand(1);

  std::string file, out_path, format = "text";
  std::string properties = "valid,controllability,observability,coordination";
  int loop_bound = 2;
  int max_coord = 4;
  std::size_t budget = 100000;

  CLI::App* analyze = app.add_subcommand("analyze", "Analyze a scenario");
  analyze->add_option("file", file, "scenario file (.dco, .uml, .xmi)")
      ->required();
  analyze->add_option("--properties", properties,
                      "comma list: valid,controllability,observability,"
                      "coordination");
  analyze->add_option("--loop-bound", loop_bound, "loop unfolding cap");
  analyze->add_option("--max-coord", max_coord,
                      "coordination set size bound");
  analyze->add_option("--budget", budget, "enumeration budget");
  analyze->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--out", out_path, "write the report to a file");

  CLI::App* refine = app.add_subcommand(
      "refine", "Insert synthesized coordination messages");
  refine->add_option("file", file, "scenario file (.dco, .uml, .xmi)")
      ->required();
  refine->add_option("--out", out_path, "output .dco path")->required();
  refine->add_option("--loop-bound", loop_bound, "loop unfolding cap");
  refine->add_option("--max-coord", max_coord, "coordination set size bound");
  refine->add_option("--budget", budget, "enumeration budget");

  CLI::App* check = app.add_subcommand(
      "check", "Exit 0 iff locally controllable and observable");
  check->add_option("file", file, "scenario file (.dco, .uml, .xmi)")
      ->required();
  check->add_option("--loop-bound", loop_bound, "loop unfolding cap");
  check->add_option("--budget", budget, "enumeration budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e);
      return kExitOk;
    }
    std::cerr << e.what() << "\n";
    return kExitInputError;
  }

  if (app.got_subcommand(analyze))
    return run_analyze(file, properties, loop_bound, max_coord, budget, format,
                       out_path);
  if (app.got_subcommand(refine))
    return run_refine(file, out_path, loop_bound, max_coord, budget);
  return run_check(file, loop_bound, budget);
}
