#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "modgrid/cli.hpp"

namespace {

bool parse_window(const std::string& text, long long& m, long long& n) {
  auto sep = text.find_first_of("xX");
  if (sep == std::string::npos || sep == 0 || sep + 1 >= text.size())
    return false;
  try {
    std::size_t used = 0;
    m = std::stoll(text.substr(0, sep), &used);
    if (used != sep) return false;
    std::string rest = text.substr(sep + 1);
    n = std::stoll(rest, &used);
    if (used != rest.size()) return false;
  } catch (const std::exception&) {
    return false;
  }
  return m >= 0 && n >= 0;
}

void add_common(CLI::App* cmd, modgrid::JobConfig& job) {
  cmd->add_option("--space", job.space, "space identifier (see README)")
      ->required();
  cmd->add_option("--prec", job.prec,
                  "q-precision bound as an integer exponent");
  cmd->add_option("--format", job.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "pretty"}));
  cmd->add_option("--cache-dir", job.cache_dir,
                  "basis cache directory (default: $MODGRID_CACHE or "
                  ".modgrid-cache)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact canonical bases, coefficient grids, and generating functions "
      "for weakly holomorphic modular forms"};
  app.require_subcommand(1);

  modgrid::JobConfig job;
  std::string window;

  CLI::App* basis =
      app.add_subcommand("basis", "row-reduced canonical family");
  add_common(basis, job);
  basis->add_option("--kind", job.kind, "family side: f or g");
  basis->add_option("--index", job.index, "largest family index");

  CLI::App* grid = app.add_subcommand(
      "grid", "coefficient grid with cell-by-cell duality check");
  add_common(grid, job);
  grid->add_option("--window", window, "index window, e.g. 8x8");

  CLI::App* genfun = app.add_subcommand(
      "genfun", "two-variable generating function decomposition");
  add_common(genfun, job);
  genfun->add_option("--window", window,
                     "verification window, e.g. 8x8");

  CLI::App* hecke =
      app.add_subcommand("hecke", "Hecke transform of a family member");
  add_common(hecke, job);
  hecke->add_option("--kind", job.kind, "family side: f or g");
  hecke->add_option("--index", job.index, "family member index");
  hecke->add_option("--M", job.hecke_m, "Hecke operator index");

  CLI::App* pair =
      app.add_subcommand("pair", "regularized pairing of dual members");
  add_common(pair, job);
  pair->add_option("--index", job.index, "f-side member index");
  pair->add_option("--dual-index", job.dual_index, "g-side member index");

  CLI::App* table =
      app.add_subcommand("table", "coefficient table of one family");
  add_common(table, job);
  table->add_option("--kind", job.kind, "family side: f or g");
  table->add_option("--window", window,
                    "max index x max exponent, e.g. 8x8");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  job.command = app.get_subcommands().front()->get_name();
  if (!window.empty() && !parse_window(window, job.window_m, job.window_n)) {
    std::cerr << "config error: --window expects MxN with M, N >= 0\n";
    return 2;
  }
  return modgrid::run(job, std::cout, std::cerr);
}
