#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sfbox/sf/syntax.hpp"

namespace sfbox::driver::gen {

// The two SF signatures programs are drawn from, as spec blocks.
const std::string& tm_spec();
const std::string& cloconv_spec();
sf::Signature tm_signature();
sf::Signature cloconv_signature();

// A quoted or parameter variable a generated term may mention.
struct Hole {
  std::string name;
  sf::ContextualType type;
  bool param = false;
};

// Fresh names with a given prefix: x1, x2, ...
class Names {
public:
  std::string fresh(const std::string& prefix) { return prefix + std::to_string(++next_); }

private:
  unsigned next_ = 0;
};

// Type-directed generation of well-typed SF terms, substitutions and patterns.
class SfGen {
public:
  SfGen(sf::Signature sig, std::mt19937_64& rng);

  const sf::Signature& signature() const { return sig_; }
  std::string atom();
  // A closed context with distinct names.
  sf::Ctx context(std::size_t max_len, Names& names);

  // A term of atom a in psi. Below depth 0 the cheapest completion is taken. Holes are used
  // directly at their own context and through closures at contexts with the same variable.
  sf::TermPtr term(const sf::Ctx& psi, const std::string& a, int depth, const std::vector<Hole>& holes = {});

  // sigma : phi -> psi for a generated phi, which is returned alongside.
  std::pair<sf::Subst, sf::Ctx> subst_into(const sf::Ctx& psi, int depth, Names& names,
                                           const std::vector<Hole>& holes = {});

  // A linear pattern of atom a in psi and the variables it binds.
  std::pair<sf::PatternPtr, std::vector<Hole>> pattern(const sf::Ctx& psi, const std::string& a, int depth,
                                                       Names& names);

  std::mt19937_64& rng() { return rng_; }

private:
  std::size_t pick(std::size_t n);
  std::size_t index(const std::string& a) const;
  int cost(const sf::TypePtr& t, unsigned avail) const;
  sf::TermPtr arg(const sf::Ctx& psi, const sf::TypePtr& t, int depth, const std::vector<Hole>& holes, bool boxed);
  sf::TermPtr term_in(const sf::Ctx& psi, const std::string& a, int depth, const std::vector<Hole>& holes, bool boxed);
  sf::PatternPtr pat_arg(const sf::Ctx& psi, const sf::TypePtr& t, int depth, Names& names, std::vector<Hole>& out);
  sf::PatternPtr pat_in(const sf::Ctx& psi, const std::string& a, int depth, Names& names, std::vector<Hole>& out);

  sf::Signature sig_;
  std::mt19937_64& rng_;
  std::vector<std::vector<int>> cost_;  // [atoms with a variable in scope, as a bit mask][atom]
};

// Surface syntax of generated terms and patterns.
std::string surface(const sf::TermPtr& m);
std::string surface(const sf::PatternPtr& r);
std::string surface(const sf::Ctx& c);  // as in a type: "g, x:tm" or "x:tm" or "."

struct ProgramOptions {
  int depth = 6;
  int functions = 3;
};

// A well-typed source program whose main has a first-order type. Recursion is structural.
std::string program(std::mt19937_64& rng, const ProgramOptions& opt = {});

}  // namespace sfbox::driver::gen
