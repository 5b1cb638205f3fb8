#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "dini/cli.hpp"

namespace {

int fail(int code, const std::string& kind, const std::string& msg) {
  dini::json err{{"error", kind}, {"exit_code", code}, {"message", msg}};
  std::cerr << err.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-function and unique-continuation experiment runner"};
  app.require_subcommand(1);
  std::string config_path, out_dir = ".";
  std::optional<unsigned long long> seed;
  std::optional<int> angular, radial;
  std::optional<double> tol;
  for (const auto& name : dini::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config (or a previously emitted report)");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Seed for sampled checks");
    sub->add_option("--angular", angular, "Initial angular node count");
    sub->add_option("--radial", radial, "Initial radial node count");
    sub->add_option("--tol", tol, "Quadrature refinement tolerance");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "config", e.what());
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    dini::json cfg = dini::json::object();
    if (!config_path.empty()) cfg = dini::unwrap_config(dini::read_json_file(config_path));
    if (seed) cfg["seed"] = *seed;
    if (angular || radial || tol) {
      dini::json& q = cfg["quadrature"];
      if (angular) q["angular"] = *angular;
      if (radial) q["radial"] = *radial;
      if (tol) q["tol"] = *tol;
    }
    dini::CommandOutput out = dini::run_command(command, cfg);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw dini::DomainError("cannot create output directory '" + out_dir + "'");
    std::string stem = command;
    for (auto& c : stem)
      if (c == '-') c = '_';
    for (const auto& [name, text] : out.files)
      dini::write_text_file((std::filesystem::path(out_dir) / name).string(), text);
    dini::write_text_file((std::filesystem::path(out_dir) / (stem + ".json")).string(),
                          out.report.dump(2) + "\n");
    std::cout << (out.report["pass"].get<bool>() ? "PASS" : "FAIL") << ' ' << command << ' '
              << out.report["case"].get<std::string>() << std::endl;
    return 0;
  } catch (const dini::DomainError& e) {
    return fail(2, "config", e.what());
  } catch (const dini::NumericError& e) {
    return fail(3, "numeric", e.what());
  } catch (const std::exception& e) {
    return fail(3, "numeric", e.what());
  }
}
