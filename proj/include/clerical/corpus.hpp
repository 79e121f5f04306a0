// SPDX-License-Identifier: Apache-2.0
//
// Corpus of example programs with their checkable properties.  Each entry
// names a .cl file and a property checker that runs the interpreter (and,
// for limit-free programs, the exact oracle) against independent reference
// values: exact rational arithmetic, the Taylor tail bound for sin, and a
// frozen decimal expansion for pi.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "clerical/denote.hpp"
#include "clerical/eval.hpp"

namespace clerical {

struct check_options {
  std::string corpus_dir;  // directory containing the .cl files
  uint64_t trials = 0;     // 0 = entry default sample count
};

struct property_report {
  std::string name;
  uint64_t samples = 0;
  uint64_t failures = 0;
  std::vector<std::string> notes;  // first few failure descriptions
  bool pass() const { return failures == 0; }
};

struct corpus_entry {
  std::string name;
  std::string file;         // basename within the corpus directory
  std::string description;  // property and sample plan
  std::function<property_report(const check_options&)> check;
};

// The fixed corpus; checks are lazy (files load when a check runs).
std::vector<corpus_entry> load_corpus();

property_report check_entry(const corpus_entry& e, const check_options& o);

// Human-readable table / machine-readable lines ("name pass|fail samples").
std::string report_text(const std::vector<property_report>& rs);
std::string report_summary(const std::vector<property_report>& rs);

// ---- reference helpers (shared with the acceptance suite) ----

// Exact rational Taylor partial sum for sin with |sin(x) - result| < tol
// (tol > 0), by the remainder bound |sin(x) - S(j,x)| <= |x|^(2j+3)/(2j+3)!.
rational sin_reference(const rational& x, const rational& tol);

// Exact rational value of a plain decimal string ("-3.25", "0.125").
rational rat_from_decimal(const std::string& s);

// First 40 fraction digits of pi (truncated, not rounded).
extern const char* const pi_digits_40;

// Source text of an expression denoting an exact rational constant.
std::string rational_literal(const rational& r);

// Parses `path`, replaces the main expression with `main_src` (which may
// call the file's functions), and elaborates.
typed_program load_with_main(const std::string& path, const std::string& main_src);

typed_program load_file(const std::string& path);

}  // namespace clerical
