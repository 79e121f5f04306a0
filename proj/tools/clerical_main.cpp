// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver.  Exit codes form a disjoint contract:
//   0 success
//   1 internal fault
//   2 static error (parse or type)
//   3 fragment violation (denote on a program containing lim)
//   4 deadlock (every guard of a case provably false)
//   5 fuel exhausted
//   6 precision cap reached
//
// Results go to stdout; diagnostics go to stderr.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "clerical/denote.hpp"
#include "clerical/eval.hpp"
#include "clerical/parser.hpp"
#include "clerical/typecheck.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_internal = 1;
constexpr int exit_static = 2;
constexpr int exit_fragment = 3;
constexpr int exit_deadlock = 4;
constexpr int exit_fuel = 5;
constexpr int exit_precision_cap = 6;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void report_span(const std::string& file, const clerical::source_span& s,
                 const std::string& what, const std::string& msg) {
  std::cerr << file << ":" << s.line << ":" << s.col << ": " << what << ": " << msg
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interpreter for a guarded-nondeterministic exact real language"};
  app.require_subcommand(1);

  std::string file;
  uint32_t digits = 20, precision_start = 60, max_precision = 1000000;
  uint32_t guard_budget = 256;
  std::optional<uint64_t> fuel, seed;

  CLI::App* cmd_run = app.add_subcommand("run", "evaluate main and print its value");
  cmd_run->add_option("file", file, "program file")->required();
  cmd_run->add_option("--digits", digits, "decimal fraction digits for real results")
      ->check(CLI::Range(uint32_t(1), uint32_t(100000)))
      ->capture_default_str();
  cmd_run->add_option("--precision", precision_start, "starting working precision (bits)")
      ->check(CLI::Range(uint32_t(2), uint32_t(1000000)))
      ->capture_default_str();
  cmd_run->add_option("--max-precision", max_precision, "precision cap (bits)")
      ->check(CLI::Range(uint32_t(2), uint32_t(1000000)))
      ->capture_default_str();
  cmd_run->add_option("--fuel", fuel, "max iterations per while-loop entry")
      ->check(CLI::Range(uint64_t(1), UINT64_MAX));
  cmd_run->add_option("--seed", seed, "scheduler seed (permutes guard polling order)");
  cmd_run->add_option("--guard-budget", guard_budget, "steps per guard poll")
      ->check(CLI::Range(uint32_t(1), uint32_t(1) << 30))
      ->capture_default_str();

  CLI::App* cmd_check = app.add_subcommand("check", "typecheck and print main's type");
  cmd_check->add_option("file", file, "program file")->required();

  uint64_t denote_fuel = 16;
  CLI::App* cmd_denote =
      app.add_subcommand("denote", "exact denotation of a limit-free program");
  cmd_denote->add_option("file", file, "program file")->required();
  cmd_denote->add_option("--fuel", denote_fuel, "while-loop unrolling depth")
      ->check(CLI::Range(uint64_t(1), uint64_t(1) << 20))
      ->capture_default_str();

  CLI::App* cmd_parse = app.add_subcommand("parse", "parse and pretty-print");
  cmd_parse->add_option("file", file, "program file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string source = read_file(file);

    clerical::program prog;
    try {
      prog = clerical::parse_program(source);
    } catch (const clerical::parse_error& e) {
      report_span(file, e.span, "parse error", e.what());
      return exit_static;
    }

    if (cmd_parse->parsed()) {
      std::cout << clerical::pretty_print(prog);
      return exit_ok;
    }

    clerical::typed_program tp;
    try {
      tp = clerical::elaborate(prog);
    } catch (const clerical::type_error& e) {
      report_span(file, e.span, "type error", e.what());
      return exit_static;
    }

    if (cmd_check->parsed()) {
      std::cout << "TYPE: " << clerical::type_name(tp.main.type) << "\n";
      return exit_ok;
    }

    if (cmd_denote->parsed()) {
      if (auto lim_at = clerical::find_lim(tp)) {
        report_span(file, *lim_at, "fragment violation",
                    "denote handles only limit-free programs");
        return exit_fragment;
      }
      std::cout << clerical::to_string(clerical::denote(tp, denote_fuel)) << "\n";
      return exit_ok;
    }

    // run
    clerical::run_options opts;
    opts.digits = digits;
    opts.precision_start = precision_start;
    opts.max_precision = max_precision;
    opts.fuel = fuel;
    opts.scheduler_seed = seed;
    opts.guard_step_budget = guard_budget;
    clerical::run_result r = clerical::run_with_restarts(tp, opts);
    if (const std::string* txt = std::get_if<std::string>(&r)) {
      std::cout << *txt << "\n";
      return exit_ok;
    }
    const clerical::diagnostic d = std::get<clerical::diagnostic>(r);
    switch (d.why) {
      case clerical::failure::deadlock:
        std::cerr << "deadlock: every guard of a case is false (precision " << d.precision
                  << ")\n";
        return exit_deadlock;
      case clerical::failure::fuel_exhausted:
        std::cerr << "fuel exhausted: a loop exceeded " << (fuel ? *fuel : 0)
                  << " iterations (precision " << d.precision << ")\n";
        return exit_fuel;
      case clerical::failure::precision_cap:
        std::cerr << "precision cap: no decision at " << d.precision << " bits\n";
        return exit_precision_cap;
    }
    return exit_internal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return exit_internal;
  }
}
