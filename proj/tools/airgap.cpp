// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end over the C interface.

#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include "CLI11.hpp"
#include "airgap/airgap.h"

namespace
{

int ExitCode(ag_status s)
{
  switch (s)
  {
  case AG_OK: return 0;
  case AG_ERR_SOLVER: return 3;
  case AG_ERR_VERIFICATION: return 4;
  case AG_ERR_IO:
  case AG_ERR_INTERNAL: return 1;
  default: return 2;
  }
}

int Report(ag_status s)
{
  std::fprintf(stderr, "airgap: %s: %s\n", ag_status_string(s), ag_last_error());
  return ExitCode(s);
}

struct ConfigDeleter
{
  void operator()(ag_config *c) const { ag_config_free(c); }
};
using ConfigPtr = std::unique_ptr<ag_config, ConfigDeleter>;

struct StringDeleter
{
  void operator()(char *s) const { ag_string_free(s); }
};
using StringPtr = std::unique_ptr<char, StringDeleter>;

ag_status Load(const std::string &path, ConfigPtr &out)
{
  ag_config *c = nullptr;
  const ag_status s = path.empty() ? ag_config_default(&c) : ag_config_load(path.c_str(), &c);
  out.reset(c);
  return s;
}

struct Args
{
  std::string config;
  std::string out;
  int snapshot_every = -1;
};

int Run(const std::string &command, const Args &args)
{
  ConfigPtr config;
  if (const ag_status s = Load(args.config, config); s != AG_OK)
  {
    return Report(s);
  }
  ag_run_options options{args.out.empty() ? nullptr : args.out.c_str(), args.snapshot_every};
  char *text = nullptr;
  ag_status s = AG_OK;
  if (command == "generate")
  {
    s = ag_run_generate(config.get(), &options, &text);
  }
  else if (command == "solve")
  {
    s = ag_run_solve(config.get(), &options, &text);
  }
  else
  {
    s = ag_run_verify(config.get(), &text);
  }
  StringPtr owned(text);
  if (text)
  {
    std::printf("%s\n", text);
    if (command == "verify" && !args.out.empty())
    {
      std::ofstream(args.out) << text << '\n';
    }
  }
  return s == AG_OK ? 0 : Report(s);
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Air-gap coupled finite element solver for rotating machines"};
  app.set_version_flag("--version", std::string(ag_version()));
  app.require_subcommand(0, 1);
  bool print_default = false;
  app.add_flag("--default-config", print_default, "Print the built-in configuration and exit");

  Args args;
  auto *generate = app.add_subcommand("generate", "Write the stator and rotor meshes");
  auto *solve = app.add_subcommand("solve", "Run the configured static or transient solve");
  auto *verify = app.add_subcommand("verify", "Run the oracle checks and print a JSON report");
  for (auto *sub : {generate, solve, verify})
  {
    sub->add_option("--config", args.config, "Configuration file (default: built-in bearing)")
      ->check(CLI::ExistingFile);
  }
  generate->add_option("--out", args.out, "Output directory");
  solve->add_option("--out", args.out, "Output directory");
  solve->add_option("--snapshot-every", args.snapshot_every, "VTK snapshot interval in steps")
    ->check(CLI::NonNegativeNumber);
  verify->add_option("--out", args.out, "Also write the report to this file");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (print_default)
  {
    char *text = nullptr;
    if (const ag_status s = ag_config_default_text(&text); s != AG_OK)
    {
      return Report(s);
    }
    StringPtr owned(text);
    std::printf("%s\n", text);
    return 0;
  }
  for (auto *sub : {generate, solve, verify})
  {
    if (*sub)
    {
      return Run(sub->get_name(), args);
    }
  }
  std::fputs(app.help().c_str(), stdout);
  return 2;
}
