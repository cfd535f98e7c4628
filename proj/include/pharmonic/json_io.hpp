#ifndef PHARMONIC_JSON_IO_HPP
#define PHARMONIC_JSON_IO_HPP

#include <json.hpp>

#include "pharmonic/periodic_finite.hpp"
#include "pharmonic/periodic_infinite.hpp"
#include "pharmonic/plaplace.hpp"
#include "pharmonic/subgroup.hpp"
#include "pharmonic/word.hpp"

namespace pharmonic {

using json = nlohmann::json;

// words are arrays of generator indices; [] is the identity
json word_to_json(const ReducedWord& w);
ReducedWord word_from_json(const json& j, int order);

json ball_to_json(const Ball& b);

// {"finite": {"A": [[1],[2]]}} or {"pair": [i, j]}
json subgroup_spec_to_json(const SubgroupSpec& spec);
SubgroupSpec subgroup_spec_from_json(const json& j, int order);

// object keyed by the word's serialized form, e.g. {"[1,2]": 0.5}
json vertex_function_to_json(const VertexFunction& u);
VertexFunction vertex_function_from_json(const json& j, int order);

// {"window": {"from": n, "values": [..]}, "tail_left": {"base":, "ratio":},
//  "tail_right": {...}, "within_coset": optional rule}
json sequence_to_json(const ResistanceSequence& seq);
ResistanceSequence sequence_from_json(const json& j);

// {"family": "U1"|"U2", "amplitude": a, "offset": o}
json member_to_json(const FamilyMember& m);
FamilyMember member_from_json(const json& j, const ResistanceSequence& seq);

// coset-pair map keyed "i-j" with decimal coset ids
json coset_resistances_to_json(const CosetResistances& r,
                               const QuotientGraph& q);
CosetResistances coset_resistances_from_json(const json& j,
                                             const QuotientGraph& q);

}  // namespace pharmonic

#endif  // PHARMONIC_JSON_IO_HPP
