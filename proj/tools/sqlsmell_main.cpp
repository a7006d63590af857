// sqlsmell: SQL anti-pattern detection, ranking and repair.
//
//   sqlsmell check <files|dirs|-> [--data db.sqlite|csvdir] [--preset C1|C2] ...
//   sqlsmell serve [--host 127.0.0.1] [--port 8080]
#include "sqlsmell/pipeline.hpp"
#include "sqlsmell/service.hpp"

#include <iostream>
#include <sstream>

#include "CLI11.hpp"

using namespace sqlsmell;

namespace {

std::vector<std::string> split_commas(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) out.push_back(part);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SQL anti-pattern detector"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "analyze SQL files");
  std::vector<std::string> inputs;
  std::string data, preset_name = "C1", weights_file, metrics_file, thresholds_file;
  std::string format = "text", inter_query, xref;
  std::optional<std::uint64_t> seed;
  bool no_data_rules = false, intra_only = false;
  std::vector<std::string> fail_on;
  std::size_t workers = 1;
  check->add_option("inputs", inputs, "SQL files, directories or - for stdin")->required();
  check->add_option("--data", data, "SQLite file or directory of CSV files");
  check->add_option("--preset", preset_name, "weight preset")
      ->check(CLI::IsMember({"C1", "C2"}, CLI::ignore_case));
  check->add_option("--weights", weights_file, "weights file (w_rp = ..., preset = ...)");
  check->add_option("--metrics", metrics_file, "metrics file (<Kind>.<metric> = value)");
  check->add_option("--thresholds", thresholds_file, "detection thresholds file");
  check->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  check->add_option("--seed", seed, "seeded reservoir sampling of dataset rows");
  check->add_option("--inter-query", inter_query, "statement ordering")
      ->check(CLI::IsMember({"count", "score"}));
  check->add_flag("--no-data-rules", no_data_rules, "skip data-phase rules");
  check->add_flag("--intra-only", intra_only, "single-statement rules only");
  check->add_option("--fail-on", fail_on, "exit 1 only for these kinds/categories (comma list)")
      ->delimiter(',');
  check->add_option("--workers", workers, "detection threads")->check(CLI::PositiveNumber);
  check->add_option("--intersection-table", xref, "name for a new intersection table");

  auto* serve = app.add_subcommand("serve", "run the REST service");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port")->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*serve) {
    Server server;
    int bound = server.bind(host, port);
    if (bound < 0) {
      std::cerr << "sqlsmell: cannot bind " << host << ":" << port << "\n";
      return kExitUsage;
    }
    std::cerr << "listening on http://" << host << ":" << bound << "/api/check\n";
    return server.listen() ? 0 : kExitUsage;
  }

  try {
    PipelineOptions opt;
    opt.inputs = inputs;
    if (!data.empty()) opt.data = data;
    opt.format = format == "json" ? ReportFormat::Json : ReportFormat::Text;
    auto& a = opt.analysis;
    a.ranking = preset(preset_name == "c2" ? "C2" : preset_name == "c1" ? "C1" : preset_name);
    if (!weights_file.empty()) apply_weights(a.ranking, read_key_values_file(weights_file));
    if (!inter_query.empty())
      a.ranking.inter_query_mode =
          inter_query == "count" ? InterQueryMode::ByFindingCount : InterQueryMode::ByScore;
    if (auto warn = normalize_weights(a.ranking)) opt.warnings.push_back(*warn);
    if (!metrics_file.empty())
      a.metrics = apply_metrics(read_key_values_file(metrics_file), a.metrics);
    if (!thresholds_file.empty()) apply_thresholds(a.build, read_key_values_file(thresholds_file));
    if (seed) {
      a.build.seed = *seed;
      a.build.sampling = Sampling::Seeded;
    }
    a.detect.data = !no_data_rules && !intra_only;
    a.detect.inter = !intra_only;
    a.detect.workers = workers;
    a.repair.intersection_table = xref;
    opt.fail_on = split_commas(fail_on);
    for (const auto& name : opt.fail_on)
      if (!valid_fail_on(name)) throw ConfigError("--fail-on: unknown kind or category " + name);

    PipelineResult r = run_pipeline(opt, std::cin);
    std::cout << r.output;
    return r.exit_code;
  } catch (const IoError& e) {
    std::cerr << "sqlsmell: " << e.what() << "\n";
  } catch (const ConfigError& e) {
    std::cerr << "sqlsmell: " << e.what() << "\n";
  }
  return kExitUsage;
}
