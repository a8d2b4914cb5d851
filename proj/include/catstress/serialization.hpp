#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "catstress/modes.hpp"
#include "catstress/states.hpp"

namespace catstress {

/// Shortest round-trip-safe text: "%.17g", with "-0" normalized to "0".
std::string format_real(double v);

/// {"dimension", "length", "mass", "coupling", "modes": [[n_1, ...], ...]}
nlohmann::json basis_to_json(const ModeBasis& basis);
BasisPtr basis_from_json(const nlohmann::json& j);

/// {"re": x, "im": y}
nlohmann::json complex_to_json(Complex c);
Complex complex_from_json(const nlohmann::json& j);

/// Coherent: {"type": "coherent", "alpha": [...]}.
/// Cat: {"type": "cat", "alpha": [...], "a": {...}, "b": {...}} plus "theta" in
/// phase form. Reading a cat with "theta" rebuilds the phase form; otherwise
/// a and b are renormalized.
nlohmann::json state_to_json(const State& state);
State state_from_json(const nlohmann::json& j, const BasisPtr& basis);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
/// FNV-1a of the canonical (sorted-key, compact) dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

}  // namespace catstress
