#pragma once

#include <string>

#include "evsys/event_system.hpp"

namespace evsys {

/// Parses a reaction-system file. One reaction per line:
///
///   [label:] coeff species (+ coeff species)* <-> ... ; kf=<rate> kr=<rate>
///
/// An omitted coefficient means 1; an empty side (or `0`) is the constant
/// monomial. `# ...` comments and blank lines are ignored. An optional
/// `@species A B C` directive pins the species index order; otherwise species
/// are indexed by first appearance. Rates accept integers, fractions `p/q`,
/// and decimals (converted exactly).
EventSystem parse_system(const std::string& text);

/// Inverse of parse_system on canonical systems: parse(serialize(E)) == E,
/// including species order and exact rates.
std::string serialize_system(const EventSystem& sys);

}  // namespace evsys
