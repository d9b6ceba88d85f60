#pragma once

#include <string>

#include "json.hpp"
#include "latfrac/atoms.hpp"
#include "latfrac/fracspec.hpp"
#include "latfrac/operators.hpp"
#include "latfrac/sequence.hpp"

namespace latfrac {

// Sequence files:
//   { "n": int, "dense": { "center": [ints], "radius": int, "values": [reals] } }
//   { "n": int, "sparse": [ [[ints], real], ... ] }
nlohmann::json sequence_to_json(const LatticeSequence& b);
LatticeSequence sequence_from_json(const nlohmann::json& j);

// Spec files:
//   { "n": int, "alpha": real, "m": int, "exponents": [reals], "matrices": [[[ints]]] }
nlohmann::json spec_to_json(const FractionalSpec& s);
FractionalSpec spec_from_json(const nlohmann::json& j);

nlohmann::json window_to_json(const CubeWindow& w);
CubeWindow window_from_json(const nlohmann::json& j, int n);

// Operator results: the sequence JSON plus a metadata object.
nlohmann::json operator_result_to_json(const OperatorResult& r);

// Atom files: sequence JSON plus { "p", "cube", "d_p" } and, when present, the
// exact certificate { "profile", "scale_num", "scale_den" }.
nlohmann::json atom_to_json(const Atom& a);
Atom atom_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);
void save_text_file(const std::string& path, const std::string& text);

}  // namespace latfrac
