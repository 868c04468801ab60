#pragma once

#include <json.hpp>

#include "strauto/presentation.hh"
#include "strauto/reductions.hh"

namespace strauto {

/// {"tracks","alphabet","pad","states","initial","finals","transitions"} with
/// transitions as [src, [letter,...], dst] tuples of letter names (pad name
/// for padding). Set-valued labels are expanded to letter tuples on save.
nlohmann::json automaton_to_json(const MultiTrackNfa& a);
MultiTrackNfa automaton_from_json(const nlohmann::json& j);

/// {"alphabet","pad","domain","equality"|null,"relations":{name:{"arity","automaton"}}}
nlohmann::json presentation_to_json(const Presentation& p);
Presentation presentation_from_json(const nlohmann::json& j);

/// {"states","initial","accepting","inputAlphabet","tapeAlphabet","blank",
///  "transitions":[[q,a,q',a',"L|R|S"],...]}
nlohmann::json tm_to_json(const TuringMachine& m);
TuringMachine tm_from_json(const nlohmann::json& j);

Presentation load_presentation(const std::string& path);
void save_presentation(const Presentation& p, const std::string& path);
TuringMachine load_tm(const std::string& path);

/// Findings and notes in a schema-stable shape for the validate subcommand.
nlohmann::json report_to_json(const ValidationReport& r, const Presentation& p);

}  // namespace strauto
