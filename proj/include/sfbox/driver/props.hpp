#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace sfbox::driver::props {

// Outcome of one property over n generated cases. Case i uses seed + i.
struct Result {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::size_t fuel_exhausted = 0;     // differential only: source runs that were cut off
  std::vector<std::string> examples;  // the first few failures
  double seconds = 0;

  bool ok() const { return failures == 0; }
};

// [id] m = m for well-typed m, up to contraction of closure substitutions.
Result subst_identity(std::uint64_t seed, std::size_t n);
// [sigma]([tau] m) = [sigma o tau] m, and sigma o tau is well typed.
Result subst_composition(std::uint64_t seed, std::size_t n);
// phi |- m : a and psi |- sigma : phi give psi |- [sigma] m : a.
Result subst_lemma(std::uint64_t seed, std::size_t n);
// Matching a pattern against its instance gives back the bindings, deterministically, and
// whenever a pattern matches a term, re-instantiating gives back the term.
Result match_roundtrip(std::uint64_t seed, std::size_t n);

// Generated programs: the translation re-checks in the target.
Result preservation(std::uint64_t seed, std::size_t n);
Result preservation(const std::vector<std::string>& programs);
// Generated programs: source and target evaluation agree.
Result differential(std::uint64_t seed, std::size_t n, std::size_t fuel);
Result differential(const std::vector<std::string>& programs, std::size_t fuel);

std::vector<std::string> generate_programs(std::uint64_t seed, std::size_t n);

std::string summary(const Result& r);

}  // namespace sfbox::driver::props
