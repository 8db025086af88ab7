#pragma once

#include <string>

#include "sfbox/coreml/syntax.hpp"

namespace sfbox::driver {

// Parses a source file. ML constructors are capitalised; inside SF terms a name is a constructor
// when the spec block declares it and a bound variable otherwise.
ml::Program parse_program(const std::string& text);

// Pieces, for tests: parsed against the given SF signature.
sf::TermPtr parse_sf_term(const sf::Signature& sig, const std::string& text);
sf::PatternPtr parse_sf_pattern(const sf::Signature& sig, const std::string& text);
ml::TypePtr parse_ml_type(const sf::Signature& sig, const std::string& text);
ml::ExprPtr parse_expr(const sf::Signature& sig, const std::string& text);

std::string read_file(const std::string& path);

}  // namespace sfbox::driver
