#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "netsample/error.hpp"
#include "netsample/keyvalue.hpp"

namespace {

using netsample::KeyValueDocument;

// Flag values that become config keys; unset flags leave the file alone.
struct Flag {
  std::string section;
  std::string key;
  std::optional<std::string> value;
};

struct Invocation {
  std::string command;
  std::optional<std::string> config;
  std::vector<std::string> overrides;
};

void add_flag(CLI::App* sub, std::vector<Flag>& flags, const std::string& names,
              std::string section, std::string key, const std::string& help) {
  flags.push_back({std::move(section), std::move(key), std::nullopt});
  sub->add_option_function<std::string>(
      names, [&flags, idx = flags.size() - 1](const std::string& v) { flags[idx].value = v; },
      help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netsample: link-tracing sample estimation with resampled inclusion frequencies"};
  app.require_subcommand(1);
  Invocation inv;
  std::vector<Flag> flags;

  for (auto name : netsample::cli::kCommands) {
    const std::string cmd(name);
    auto* sub = app.add_subcommand(cmd);
    sub->add_option("-c,--config", inv.config, "INI config file")->check(CLI::ExistingFile);
    sub->add_option("--set", inv.overrides, "override a key: section.key=value")
        ->take_all();
    add_flag(sub, flags, "-o,--out", "", "out", "output directory");
    add_flag(sub, flags, "--seed", "", "seed", "master seed");
    add_flag(sub, flags, "-w,--workers", "", "workers", "worker threads");
    if (cmd == "sample") {
      add_flag(sub, flags, "--design", "design", "preset", "rds or snowball");
      add_flag(sub, flags, "-k,--coupons", "design", "coupons", "coupons per respondent");
      add_flag(sub, flags, "-n,--target", "design", "target", "sample size");
    }
    if (cmd == "resample" || cmd == "estimate" || cmd == "export") {
      add_flag(sub, flags, "--sample-nodes", "sample", "nodes", "sample nodes file");
      add_flag(sub, flags, "--sample-edges", "sample", "edges", "sample edges file");
    }
    if (cmd == "estimate" || cmd == "export") {
      add_flag(sub, flags, "--frequencies", "sample", "frequencies", "frequencies file");
    }
    if (cmd == "resample") {
      add_flag(sub, flags, "--mode", "resample", "mode", "process, repeated, with-replacement");
      add_flag(sub, flags, "-T,--iterations", "resample", "iterations", "resamples T");
      add_flag(sub, flags, "--target", "resample", "target", "resample target size");
      add_flag(sub, flags, "--compare", "resample", "compare", "oracle.csv to compare with");
    }
    if (cmd == "simulate") {
      add_flag(sub, flags, "-R,--replications", "experiment", "replications",
               "replications per design");
      add_flag(sub, flags, "--from", "experiment", "from", "rebuild from replications.csv");
    }
    if (cmd == "oracle") {
      add_flag(sub, flags, "--graph", "oracle", "graph", "path, star, cycle, complete, file");
      add_flag(sub, flags, "--nodes", "oracle", "nodes", "node count");
      add_flag(sub, flags, "--design", "oracle", "design", "one-wave, two-wave, ...");
    }
    sub->callback([&inv, cmd] { inv.command = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    KeyValueDocument doc;
    std::filesystem::path base;
    if (inv.config) {
      try {
        doc = KeyValueDocument::load(*inv.config);
      } catch (const netsample::ParseError& e) {
        throw netsample::cli::ConfigError({e.what()});
      }
      base = std::filesystem::path(*inv.config).parent_path();
    } else {
      std::istringstream empty;
      doc = KeyValueDocument::parse(empty, "command line");
    }
    for (const auto& f : flags) {
      if (f.value) doc.set(f.section, f.key, *f.value);
    }
    for (const auto& o : inv.overrides) netsample::cli::apply_override(doc, o);
    const auto cfg = netsample::cli::parse_config(doc, base);
    const auto output = netsample::cli::execute(inv.command, cfg);
    netsample::cli::write_artifacts(cfg.out, output);
    std::cout << output.summary;
    std::cout << "wrote";
    for (const auto& a : output.files) std::cout << ' ' << a.name;
    std::cout << " to " << cfg.out.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << netsample::cli::error_line(e) << '\n';
    return netsample::cli::exit_status(e);
  }
}
