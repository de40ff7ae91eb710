#ifndef MATCHFORGE_JSON_IO_HPP
#define MATCHFORGE_JSON_IO_HPP

#include <string>

#include "json.hpp"
#include "matchforge/choice.hpp"
#include "matchforge/engine.hpp"
#include "matchforge/model.hpp"

namespace matchforge {

/// Parses and validates an instance. Every rejection names the offending
/// field. Unknown keys are rejected. Preference arrays may use the
/// acceptable-prefix shorthand: entries before "null" are the acceptable
/// contracts in order; "null" may be omitted (appended), and contracts not
/// listed are placed below null in ascending id order.
Problem load_instance(const std::string& text);
Problem load_instance_file(const std::string& path);

/// Canonical serialization: full preference orders (shorthand expanded),
/// sorted keys, two-space indentation. load(save(p)) == p structurally, and
/// identical problems serialize to identical bytes.
std::string save_instance(const Problem& p);
void save_instance_file(const Problem& p, const std::string& path);

nlohmann::json trace_to_json(const Problem& p, const DATrace& trace);
nlohmann::json matching_to_json(const Problem& p, const Matching& m);

/// Tabulated rules travel as {"ground_size": n, "choices": {"<subset mask>":
/// "<chosen mask>"}} with decimal-string masks over a dense 0..n-1 ground.
std::string tabulated_rule_to_json(const ChoiceFunction& rule);
ChoiceFunction tabulated_rule_from_json(const std::string& text);
ChoiceFunction tabulated_rule_from_file(const std::string& path);

}  // namespace matchforge

#endif
