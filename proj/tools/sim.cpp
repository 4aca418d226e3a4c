// SPDX-License-Identifier: Apache-2.0
// sim: command-line front end over the circqft C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "circqft/circqft.h"
#include "json.hpp"

namespace {

struct Failure {
  cqft_status status;
  std::string message;
};

void check(cqft_status st) {
  if (st != CQFT_OK) throw Failure{st, cqft_last_error()};
}

// Exit codes 2/3/4 map one-to-one; anything else the library reports is
// folded into the numerical bucket so scripts only see documented codes.
int exit_code(cqft_status st) {
  switch (st) {
    case CQFT_ERR_CONFIG:
    case CQFT_ERR_INVALID_ARGUMENT:
      return 2;
    case CQFT_ERR_PRECONDITION:
      return 3;
    default:
      return 4;
  }
}

int report(const Failure& f) {
  nlohmann::ordered_json rec;
  rec["error"] = cqft_status_name(f.status);
  rec["exit_code"] = exit_code(f.status);
  rec["message"] = f.message;
  std::cerr << rec.dump() << "\n";
  return exit_code(f.status);
}

template <class Getter>
std::string fetch_text(Getter get) {
  size_t needed = 0;
  get(nullptr, 0, &needed);
  std::string buf(needed, '\0');
  check(get(buf.data(), buf.size(), &needed));
  buf.resize(needed ? needed - 1 : 0);
  return buf;
}

using ScenarioPtr = std::unique_ptr<cqft_scenario, decltype(&cqft_scenario_free)>;
using ResultPtr = std::unique_ptr<cqft_result, decltype(&cqft_result_free)>;

struct Source {
  std::string preset;
  std::string config;
};

ScenarioPtr load(const Source& src) {
  cqft_scenario* raw = nullptr;
  if (!src.preset.empty() && !src.config.empty())
    throw Failure{CQFT_ERR_CONFIG, "--preset and --config are mutually exclusive"};
  if (!src.preset.empty())
    check(cqft_scenario_from_preset(src.preset.c_str(), &raw));
  else if (!src.config.empty())
    check(cqft_scenario_from_config_file(src.config.c_str(), &raw));
  else
    throw Failure{CQFT_ERR_CONFIG, "one of --preset or --config is required"};
  return ScenarioPtr(raw, cqft_scenario_free);
}

void add_source(CLI::App* cmd, Source& src) {
  cmd->add_option("--preset", src.preset, "named figure preset (see `sim presets`)");
  cmd->add_option("--config", src.config, "scenario config file");
}

struct RunArgs {
  Source src;
  std::optional<std::size_t> samples;
  std::string out;
  bool with_cd = false;
  std::optional<std::uint64_t> seed;
};

int run(const std::string& kind, const RunArgs& a) {
  auto s = load(a.src);
  check(cqft_scenario_set_kind(s.get(), kind.c_str()));
  if (a.samples) check(cqft_scenario_set_samples(s.get(), *a.samples));
  if (a.with_cd) check(cqft_scenario_set_with_cd(s.get(), 1));
  if (a.seed) check(cqft_scenario_set_seed(s.get(), *a.seed));

  cqft_result* raw = nullptr;
  check(cqft_run(s.get(), &raw));
  ResultPtr r(raw, cqft_result_free);

  for (size_t i = 0; i < cqft_result_warning_count(r.get()); ++i)
    std::cerr << "warning: " << cqft_result_warning(r.get(), i) << "\n";

  if (a.out.empty() || a.out == "-") {
    std::cout << fetch_text([&](char* b, size_t c, size_t* n) { return cqft_result_csv(r.get(), b, c, n); });
  } else {
    check(cqft_result_write(s.get(), r.get(), a.out.c_str()));
  }
  return 0;
}

int list_presets(const std::string& name) {
  if (!name.empty()) {
    std::cout << fetch_text(
        [&](char* b, size_t c, size_t* n) { return cqft_preset_describe(name.c_str(), b, c, n); });
    return 0;
  }
  for (size_t i = 0; i < cqft_preset_count(); ++i) {
    const char* p = cqft_preset_name(i);
    std::cout << fetch_text([&](char* b, size_t c, size_t* n) { return cqft_preset_describe(p, b, c, n); });
    std::cout << "\n";
  }
  return 0;
}

int export_scenario(const Source& src, bool as_json) {
  auto s = load(src);
  std::cout << fetch_text(
      [&](char* b, size_t c, size_t* n) { return cqft_scenario_serialize(s.get(), as_json ? 1 : 0, b, c, n); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-qubit circulant QFT gate simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cqft_version());

  const std::vector<std::string> kinds = {"spectrum",       "gate-fidelity",   "adiabatic-fidelity",
                                          "entangle-sweep", "counter-driving", "ion-couplings"};
  RunArgs run_args;
  std::string chosen_kind;
  for (const auto& k : kinds) {
    auto* cmd = app.add_subcommand(k, "run the " + k + " scenario");
    add_source(cmd, run_args.src);
    cmd->add_option("--samples", run_args.samples, "number of time samples")->check(CLI::PositiveNumber);
    cmd->add_option("--out", run_args.out, "CSV output path (default: stdout)");
    cmd->add_flag("--with-cd", run_args.with_cd, "add counter-diabatic driving (adiabatic-fidelity)");
    cmd->add_option("--seed", run_args.seed, "seed recorded in the output metadata");
    cmd->callback([&chosen_kind, k] { chosen_kind = k; });
  }

  std::string preset_name;
  auto* presets = app.add_subcommand("presets", "list presets or describe one");
  presets->add_option("name", preset_name, "preset to describe");

  Source export_src;
  bool as_json = false;
  auto* exp = app.add_subcommand("export", "print a scenario as config text or JSON");
  add_source(exp, export_src);
  exp->add_flag("--json", as_json, "emit JSON instead of config text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report({CQFT_ERR_CONFIG, e.what()});
  }

  try {
    if (presets->parsed()) return list_presets(preset_name);
    if (exp->parsed()) return export_scenario(export_src, as_json);
    return run(chosen_kind, run_args);
  } catch (const Failure& f) {
    return report(f);
  }
}
