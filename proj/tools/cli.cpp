#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>

#include "irid/error.hpp"
#include "irid/io.hpp"
#include "irid/oracle.hpp"
#include "irid/solver.hpp"

namespace irid::cli {
namespace {

struct SamplerFlags {
  std::uint64_t seed = 1;
  std::size_t burn_in = SamplerConfig{}.burn_in;
  std::size_t samples = SamplerConfig{}.samples;
  std::size_t thinning = 1;
  std::string objective;
  bool crn = false;

  SolveOptions options(Backend backend) const {
    SolveOptions o;
    o.backend = backend;
    o.sampler = {seed, burn_in, samples, thinning};
    o.common_random_numbers = crn;
    if (objective == "max") o.objective_override = Objective::maximize;
    if (objective == "min") o.objective_override = Objective::minimize;
    return o;
  }
};

void add_sampler_flags(CLI::App* cmd, SamplerFlags& f) {
  cmd->add_option("--seed", f.seed, "Base seed of the gibbs backend")->capture_default_str();
  cmd->add_option("--burn-in", f.burn_in, "Discarded sweeps per chain")->capture_default_str();
  cmd->add_option("--samples", f.samples, "Recorded sweeps per chain")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--thinning", f.thinning, "Keep every n-th recorded sweep")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--objective", f.objective, "Override the model objective")
      ->check(CLI::IsMember({"max", "min"}));
  cmd->add_flag("--crn", f.crn, "Share random numbers across the alternatives of a cell");
}

void report(const Error& e, std::ostream& err) {
  for (const Issue& issue : e.issues()) {
    err << "error [" << to_string(issue.code) << "]";
    if (!issue.path.empty()) err << " at " << issue.path;
    err << ": " << issue.message << "\n";
  }
}

std::string cell_label(const CellDiagnostics& d) {
  std::string s = d.decision + " | ";
  for (std::size_t i = 0; i < d.dependency_vars.size(); ++i) {
    s += (i ? ", " : "") + d.dependency_vars[i] + "=" + d.dependency_labels[i];
  }
  return s;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const IridModel model = load_model(path);
  out << "OK\n";
  (void)model;
  return kOk;
}

int cmd_solve(const std::string& path, Backend backend, const SamplerFlags& flags, const std::string& out_path,
              std::ostream& out, std::ostream& err) {
  const IridModel model = load_model(path);
  const Solution solution = solve(model, flags.options(backend));
  if (!out_path.empty()) {
    std::ofstream file(out_path, std::ios::binary);
    file << serialize_solution(solution, model);
    if (!file) {
      err << "error: cannot write '" << out_path << "'\n";
      return kRuntime;
    }
  }
  out << format_policy_table(solution, model);
  return kOk;
}

int cmd_compare(const std::string& path, const SamplerFlags& flags, std::ostream& out) {
  const IridModel model = load_model(path);
  const Solution exact = solve(model, flags.options(Backend::exact));
  const Solution gibbs = solve(model, flags.options(Backend::gibbs));

  out << "cell                                    alternative        exact     estimate    std error\n";
  for (std::size_t i = 0; i < exact.diagnostics.size() && i < gibbs.diagnostics.size(); ++i) {
    const CellDiagnostics& a = exact.diagnostics[i];
    const CellDiagnostics& b = gibbs.diagnostics[i];
    const Frame& frame = model.frame(model.id(a.decision));
    std::string label = cell_label(a);
    if (a.forced || a.zero_probability) {
      out << label << "  " << (a.forced ? "forced " : "zero-probability, ") << frame.label(a.chosen) << "\n";
      continue;
    }
    for (std::size_t j = 0; j < a.evaluations.size(); ++j) {
      const auto& ea = a.evaluations[j];
      const auto* eb = j < b.evaluations.size() ? &b.evaluations[j] : nullptr;
      char line[256];
      std::snprintf(line, sizeof line, "%-40s%-12s%13s%13s%13s", j == 0 ? label.c_str() : "",
                    frame.label(ea.alternative).c_str(), format_fixed(ea.value, 2).c_str(),
                    eb ? format_fixed(eb->value, 2).c_str() : "-", eb ? format_fixed(eb->std_error, 2).c_str() : "-");
      out << line << "\n";
    }
    out << "exact chooses " << frame.label(a.chosen) << ", gibbs chooses " << frame.label(b.chosen)
        << (a.chosen == b.chosen ? "" : "  <-- differs") << "\n";
  }

  bool agree = true;
  out << "\n";
  for (std::size_t i = 0; i < exact.policies.size(); ++i) {
    const bool same = exact.policies[i] == gibbs.policies[i];
    agree = agree && same;
    out << "policy " << exact.policies[i].decision << ": " << (same ? "agree" : "DISAGREE") << "\n";
  }
  out << "expected value: exact " << format_fixed(exact.expected_value, 2) << ", gibbs "
      << format_fixed(gibbs.expected_value, 2) << " (std error " << format_fixed(gibbs.terminal.std_error, 2)
      << ")\n";
  out << (agree ? "policies agree\n" : "policies differ\n");
  return agree ? kOk : kDisagree;
}

int cmd_oracle(const std::string& path, const EnumerationBudget& budget, std::ostream& out) {
  const IridModel model = load_model(path);
  const PolicySearchResult result = exhaustive_policy_search(model, budget);
  Solution shown;
  shown.policies = result.policies;
  shown.expected_value = result.expected_value;
  out << format_policy_table(shown, model);
  out << "combinations searched: " << result.combinations << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solve information/relevance influence diagrams", "irid"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "irid 0.1.0");

  std::string model_path;
  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("model", model_path, "Model file (JSON)")->required()->check(CLI::ExistingFile);
  };

  auto* validate = app.add_subcommand("validate", "Check a model file");
  add_model(validate);

  SamplerFlags flags;
  std::string backend_name = "exact";
  std::string out_path;
  auto* solve_cmd = app.add_subcommand("solve", "Compute optimal decision functions");
  add_model(solve_cmd);
  solve_cmd->add_option("--backend", backend_name, "exact or gibbs")
      ->check(CLI::IsMember({"exact", "gibbs"}))
      ->capture_default_str();
  add_sampler_flags(solve_cmd, flags);
  solve_cmd->add_option("--out", out_path, "Write the solution JSON here");

  auto* compare = app.add_subcommand("compare", "Solve with both backends and compare policies");
  add_model(compare);
  add_sampler_flags(compare, flags);

  EnumerationBudget budget;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive search over all admissible policies");
  add_model(oracle);
  oracle->add_option("--max-combinations", budget.max_policy_combinations, "Policy combination budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  oracle->add_option("--max-joint", budget.max_joint_configs, "Joint configuration budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::vector<std::string> argv_storage{"irid"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(model_path, out);
    const Backend backend = backend_name == "gibbs" ? Backend::gibbs : Backend::exact;
    if (*solve_cmd) return cmd_solve(model_path, backend, flags, out_path, out, err);
    if (*compare) return cmd_compare(model_path, flags, out);
    if (*oracle) return cmd_oracle(model_path, budget, out);
  } catch (const Error& e) {
    report(e, err);
    return is_validation_error(e.code()) ? kValidation : kRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

}  // namespace irid::cli
