#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfbox/coreml/syntax.hpp"
#include "sfbox/diagnostic.hpp"
#include "sfbox/translate/translate.hpp"

namespace sfbox::translate {

struct DeclReport {
  std::string name;
  bool target_ok = false;
  std::optional<Diagnostic> target_error;
  std::size_t lemmas = 0;
  std::size_t lemma_failures = 0;
};

struct LemmaFailure {
  std::string decl;
  std::string lemma;
  std::string what;
  Diagnostic diag;
};

struct Report {
  bool source_ok = false;
  std::optional<Diagnostic> source_error;
  std::vector<Diagnostic> source_warnings;
  std::vector<Diagnostic> target_warnings;
  std::vector<DeclReport> decls;
  std::vector<LemmaFailure> failures;
  std::optional<Translation> translation;

  bool ok() const;
  std::string str() const;
};

// Checks the source, translates it, re-checks every definition in the target, and re-checks
// each embedded term, substitution and pattern at its translated type.
Report verify_preservation(const ml::Program& source);

// The target half of verify_preservation, for a translation of an already checked program.
void verify_translation(const Translation& t, Report& r);

const char* lemma_name(Obligation::Kind k);

}  // namespace sfbox::translate
