#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tocl/tocl.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kViolation = 2, kOracle = 3 };

void write_text(const std::filesystem::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw tocl::Error(tocl::ErrorKind::Format, "cannot write '" + p.string() + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal OCL consistency checker"};
  app.require_subcommand(1);

  std::string schema_path, constraints_path, artifacts_path, changes_path, format = "json";
  bool stats = false, oracle = false, fail_on_violation = false, batch = false;
  auto* check = app.add_subcommand("check", "replay a change log and stream verdicts");
  check->add_option("--schema", schema_path, "schema JSON")->required()->check(CLI::ExistingFile);
  check->add_option("--constraints", constraints_path, "constraint file")->required()->check(CLI::ExistingFile);
  check->add_option("--artifacts", artifacts_path, "initial artifact dump")->required()->check(CLI::ExistingFile);
  check->add_option("--changes", changes_path, "change log (JSON Lines)")->required()->check(CLI::ExistingFile);
  check->add_option("--format", format, "verdict format")->check(CLI::IsMember({"json", "text"}));
  check->add_flag("--stats", stats, "print run statistics to stderr");
  check->add_flag("--oracle", oracle, "cross-check every verdict against the reference evaluator");
  check->add_flag("--fail-on-violation", fail_on_violation, "exit 2 if a final verdict is false");
  check->add_flag("--batch-by-timestamp", batch, "group records sharing a timestamp into one change set");

  auto* parse = app.add_subcommand("parse", "parse and type-check constraints");
  parse->add_option("--schema", schema_path, "schema JSON")->required()->check(CLI::ExistingFile);
  parse->add_option("--constraints", constraints_path, "constraint file")->required()->check(CLI::ExistingFile);

  std::string pattern, arg_a, arg_b;
  bool strict = false;
  auto* patterns = app.add_subcommand("patterns", "DECLARE pattern library");
  patterns->require_subcommand(0, 1);
  auto* list = patterns->add_subcommand("list", "list the patterns");
  auto* expand = patterns->add_subcommand("expand", "expand a pattern");
  expand->add_option("name", pattern, "pattern name")->required();
  expand->add_option("--a", arg_a, "expression for A")->required();
  expand->add_option("--b", arg_b, "expression for B");
  expand->add_flag("--strict", strict, "only the formulas listed verbatim");

  std::uint64_t seed = 1;
  std::size_t issues = 400;
  std::string out_dir;
  auto* generate = app.add_subcommand("generate", "write a synthetic issue-tracker workload");
  generate->add_option("--seed", seed, "random seed");
  generate->add_option("--issues", issues, "number of issues")->check(CLI::PositiveNumber);
  generate->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check) {
      auto in = tocl::load_replay_input(schema_path, constraints_path, artifacts_path, changes_path, batch);
      auto fmt = format == "text" ? tocl::VerdictFormat::Text : tocl::VerdictFormat::Json;
      std::ios::sync_with_stdio(false);
      auto result = tocl::run_replay(in, {oracle}, [&](const tocl::Verdict& v) { tocl::write_verdict(std::cout, v, fmt); });
      std::cout.flush();
      if (stats) std::cerr << tocl::stats_to_json(result.stats).dump(2) << '\n';
      if (!result.oracle_disagreements.empty()) {
        for (const auto& d : result.oracle_disagreements) std::cerr << "oracle: " << d << '\n';
        return kOracle;
      }
      if (oracle) std::cerr << "oracle: all verdicts agree\n";
      if (fail_on_violation) {
        for (const auto& v : result.final_verdicts) {
          if (!tocl::holds(v.value)) return kViolation;
        }
      }
      return kOk;
    }
    if (*parse) {
      auto schema = tocl::load_schema(schema_path);
      for (const auto& def : tocl::parse_constraint_file(tocl::read_file(constraints_path), schema)) {
        std::cout << def.to_text() << '\n';
      }
      return kOk;
    }
    if (*patterns) {
      if (*expand) {
        std::cout << tocl::expand_pattern(pattern, arg_a, arg_b, strict) << '\n';
        return kOk;
      }
      (void)list;
      for (const auto& p : tocl::pattern_table()) {
        std::cout << p.name << (p.derived ? " (derived)" : "") << ": " << p.formula << '\n';
      }
      return kOk;
    }
    if (*generate) {
      namespace fs = std::filesystem;
      fs::create_directories(out_dir);
      auto w = tocl::workload::generate(seed, issues);
      write_text(fs::path(out_dir) / "schema.json", tocl::workload::kSchema);
      write_text(fs::path(out_dir) / "constraints.tocl", tocl::workload::kConstraints);
      write_text(fs::path(out_dir) / "artifacts.json", w.artifacts.dump(2) + "\n");
      write_text(fs::path(out_dir) / "changes.jsonl", tocl::workload::changes_to_jsonl(w.changes));
      std::cerr << "wrote " << w.changes.size() << " change records for " << issues << " issues to " << out_dir << '\n';
      return kOk;
    }
  } catch (const tocl::Error& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
