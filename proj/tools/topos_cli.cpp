// Command-line front end: topos eval|tables|axioms|subobjects.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "topos/commands.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw topos::InvalidArgument("cannot read workspace '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elementary topos workbench over finite categories"};
  app.require_subcommand(1);

  std::string workspace_path;
  std::string topos_name;
  std::string format_name = "ascii";
  app.add_option("--workspace,-w", workspace_path, "Workspace file");
  app.add_option("--topos", topos_name, "Topos without a workspace: finset, arrow, slice(finset,{..}) or presheaf(..)");
  app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"ascii", "json"}));

  auto* eval = app.add_subcommand("eval", "Evaluate a sentence; exit 0 iff its value is T");
  std::string formula;
  bool trace = false;
  eval->add_option("formula", formula, "Formula name or literal")->required();
  eval->add_flag("--trace", trace, "Print every interpretation step");

  auto* tables = app.add_subcommand("tables", "Truth tables of the connectives over the global truth values");

  auto* axioms = app.add_subcommand("axioms", "Boolean, well-pointedness, choice and NNO checks on small probes");
  std::size_t bound = 2;
  axioms->add_option("--bound,-k", bound, "Largest probe size");

  auto* subobjects = app.add_subcommand("subobjects", "Subobjects of an object and their characters");
  std::string object;
  subobjects->add_option("object", object, "Sort name, 1, 0 or Omega")->required();

  for (auto* sub : {eval, tables, axioms, subobjects}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return topos::exit_code::kUsage;
  }

  try {
    if (workspace_path.empty() == topos_name.empty()) {
      std::cerr << "error: give exactly one of --workspace or --topos\n";
      return topos::exit_code::kUsage;
    }
    const auto text = workspace_path.empty() ? "topos " + topos_name : read_file(workspace_path);
    const auto ws = topos::load_workspace(text);
    const auto format = format_name == "json" ? topos::OutputFormat::Json : topos::OutputFormat::Ascii;

    topos::CommandResult result;
    if (eval->parsed()) result = topos::cmd_eval(ws, formula, trace, format);
    else if (tables->parsed()) result = topos::cmd_tables(ws, format);
    else if (axioms->parsed()) result = topos::cmd_axioms(ws, bound, format);
    else result = topos::cmd_subobjects(ws, object, format);
    std::cout << result.output;
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return topos::exit_code_for(e);
  }
}
