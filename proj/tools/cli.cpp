#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "omicsprep/closure_bias.hpp"
#include "omicsprep/csv.hpp"
#include "omicsprep/design.hpp"
#include "omicsprep/error.hpp"
#include "omicsprep/pipeline.hpp"
#include "omicsprep/powersim.hpp"
#include "omicsprep/serialize.hpp"

namespace omicsprep::cli {
namespace {

namespace fs = std::filesystem;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string format;
};

void require_output(const Globals& g, const char* what) {
  if (g.output.empty()) throw ConfigError(std::string("--output ") + what + " is required");
}

void require_format(const Globals& g, std::initializer_list<std::string_view> allowed,
                    const char* command) {
  if (g.format.empty()) return;
  for (auto a : allowed) {
    if (g.format == a) return;
  }
  throw ConfigError(std::string("--format ") + g.format + " is not supported by " + command);
}

fs::path ensure_dir(const std::string& dir) {
  fs::path path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
  return path;
}

// --- transform -------------------------------------------------------------

struct TransformArgs {
  std::string input;
  std::string pipeline;
  std::string audit;
  bool no_header = false;
  bool no_id = false;
};

int cmd_transform(const TransformArgs& a, const Globals& g, std::ostream& err) {
  require_output(g, "<csv path>");
  require_format(g, {"csv"}, "transform");
  const CsvOptions options{!a.no_header, !a.no_id};
  const FeatureMatrix matrix = load_csv(a.input, options);
  const Pipeline pipeline = pipeline_from_json(csv::read_file(a.pipeline));
  const PipelineResult result = apply_pipeline(matrix, pipeline);
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  save_csv(result.matrix, g.output);
  csv::write_file(a.audit.empty() ? g.output + ".audit.json" : a.audit,
                  audit_to_json(result));
  return kOk;
}

// --- design ----------------------------------------------------------------

struct DesignArgs {
  std::string roster;
  std::size_t plates = 0;
  bool diagnose_only = false;
  std::string assignment;
  double warn_threshold = 0.5;
};

int cmd_design(const DesignArgs& a, const Globals& g, std::ostream& err) {
  require_output(g, "<directory>");
  require_format(g, {"json"}, "design");
  const SampleRoster roster = load_roster(a.roster);
  PlateAssignment assignment;
  if (a.diagnose_only) {
    if (a.assignment.empty()) throw ConfigError("--diagnose-only needs --assignment");
    assignment = load_assignment(a.assignment);
  } else {
    if (a.plates == 0) throw ConfigError("--plates is required (>= 1)");
    assignment = block_randomize(roster, a.plates, g.seed.value_or(1));
  }
  const auto report = diagnose(assignment, roster, DiagnoseOptions{a.warn_threshold});
  const auto dir = ensure_dir(g.output);
  if (!a.diagnose_only) csv::write_file(dir / "assignment.csv", assignment_to_csv(assignment));
  csv::write_file(dir / "report.json", report_to_json(report));
  err << "verdict: " << verdict_name(report.verdict)
      << " (single-group plates: " << report.single_group_batches << "/"
      << report.counts.size() << ", cramers_v: " << report.cramers_v << ")\n";
  return kOk;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  bool paper = false;
  std::optional<unsigned> threads;
};

std::string file_stem(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
    out.push_back(keep ? c : '_');
  }
  return out;
}

int cmd_simulate(const SimulateArgs& a, const Globals& g, std::ostream& err) {
  require_output(g, "<directory>");
  require_format(g, {"csv", "svg"}, "simulate");
  if (a.paper == !a.config.empty()) {
    throw ConfigError("simulate needs exactly one of --config or --paper");
  }
  SimConfig config = a.paper ? SimConfig{} : sim_config_from_json(csv::read_file(a.config));
  if (g.seed) config.grid.seed = *g.seed;
  if (a.threads) config.threads = *a.threads;

  const auto dir = ensure_dir(g.output);
  bool flagged = false;
  RunOptions options;
  options.threads = config.threads;
  for (const auto& scenario : config.scenarios) {
    const auto curves = run_power(scenario, config.grid, options);
    const std::string stem = "power_" + file_stem(scenario.name);
    if (g.format.empty() || g.format == "csv") {
      emit_curves(curves, dir / (stem + ".csv"), CurveFormat::csv);
    }
    if (g.format.empty() || g.format == "svg") {
      emit_curves(curves, dir / (stem + ".svg"), CurveFormat::svg);
    }
    for (const auto& c : curves) {
      for (const auto& p : c.points) {
        if (p.flagged) {
          err << "flagged: " << scenario.name << " sigma_b=" << c.sigma_b
              << " effect=" << p.effect << " failed fits=" << p.n_failed << "\n";
          flagged = true;
        }
      }
    }
  }
  return flagged ? kFlaggedCells : kOk;
}

// --- demo-closure ----------------------------------------------------------

struct ClosureArgs {
  std::size_t p = 3;
  std::size_t n = 10000;
};

int cmd_demo_closure(const ClosureArgs& a, const Globals& g, std::ostream& err) {
  require_output(g, "<json path>");
  require_format(g, {"json"}, "demo-closure");
  const auto report = closure_bias_experiment(a.p, a.n, g.seed.value_or(1));
  csv::write_file(g.output, bias_report_to_json(report));
  err << "mean off-diagonal correlation: before " << report.mean_offdiag_before
      << ", after " << report.mean_offdiag_after << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Preprocessing and design toolkit for spectrometry omics data", "omicsprep"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--seed", globals.seed, "Random seed (u64)");
  app.add_option("--output", globals.output, "Output file or directory");
  app.add_option("--format", globals.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "svg"}));

  TransformArgs transform;
  auto* t = app.add_subcommand("transform", "Apply a transform pipeline to a feature matrix");
  t->add_option("--input", transform.input, "Feature matrix CSV")->required();
  t->add_option("--pipeline", transform.pipeline, "Pipeline JSON")->required();
  t->add_option("--audit", transform.audit, "Audit JSON path (default <output>.audit.json)");
  t->add_flag("--no-header", transform.no_header, "Input has no header row");
  t->add_flag("--no-id-column", transform.no_id, "Input has no id column");

  DesignArgs design;
  auto* d = app.add_subcommand("design", "Block-randomise samples to plates and diagnose");
  d->add_option("--roster", design.roster, "Roster CSV (id, group[, stratum])")->required();
  d->add_option("--plates", design.plates, "Number of plates");
  d->add_flag("--diagnose-only", design.diagnose_only, "Only diagnose an existing assignment");
  d->add_option("--assignment", design.assignment, "Assignment CSV (id, plate)");
  d->add_option("--warn-threshold", design.warn_threshold, "Cramer's V warning threshold")
      ->check(CLI::Range(0.0, 1.0));

  SimulateArgs simulate;
  auto* s = app.add_subcommand("simulate", "Monte Carlo power curves for plate designs");
  s->add_option("--config", simulate.config, "Simulation config JSON");
  s->add_flag("--paper", simulate.paper, "Four built-in designs over the default grid");
  s->add_option("--threads", simulate.threads, "Worker threads (0: all cores)");

  ClosureArgs closure_args;
  auto* c = app.add_subcommand("demo-closure", "Correlation bias induced by closure");
  c->add_option("--p", closure_args.p, "Number of variables");
  c->add_option("--n", closure_args.n, "Number of samples");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    if (t->parsed()) return cmd_transform(transform, globals, err);
    if (d->parsed()) return cmd_design(design, globals, err);
    if (s->parsed()) return cmd_simulate(simulate, globals, err);
    return cmd_demo_closure(closure_args, globals, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kError;
}

}  // namespace omicsprep::cli
