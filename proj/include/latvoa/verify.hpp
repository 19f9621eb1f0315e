// Verification suites behind `latvoa verify` and the acceptance runner; one
// suite per acceptance criterion.
#pragma once

#include "latvoa/pipeline.hpp"

namespace latvoa {

struct VerifyResult {
  std::string name;
  bool pass = false;
  std::string table;  // human-readable evidence, one line per checked fact
};

// Bundled example instances (also shipped as data/*.voa with identical text).
std::string builtin_problem_text(const std::string& name);
ProblemInstance builtin_problem(const std::string& name);
std::vector<std::string> builtin_problem_names();

VerifyResult verify_nilpotency();                    // criterion 1
VerifyResult verify_dimone(int64_t charge_bound = 4, int64_t lmax = 4);  // criterion 2
VerifyResult verify_homotopy();                      // criterion 3
VerifyResult verify_dimany(int64_t lmax = 3);        // criterion 4
VerifyResult verify_orbiloc(int64_t lmax = 3);       // criterion 5
VerifyResult verify_easyderham();                    // criterion 6
VerifyResult verify_toricbundle();                   // criterion 7
VerifyResult verify_wholen();                        // criterion 8
VerifyResult verify_conebig();                       // criterion 9
VerifyResult verify_elliptic();                      // criterion 10 (slow)
VerifyResult verify_mirror();                        // criterion 11
VerifyResult verify_grading();                       // criterion 12

// name -> runner; "all" runs everything except the slow elliptic suite.
std::vector<VerifyResult> run_verify(const std::string& which);

// Flat-space oracle for Theorem `dimone` tests: number of normal-ordered
// monomials in the modes of a, b, phi, psi at given charge and weight.
int64_t flat_monomial_count(int64_t charge, int64_t weight);

}  // namespace latvoa
