#pragma once

#include <string>

#include <json.hpp>

#include "smallsum/classifier.hpp"
#include "smallsum/verifier.hpp"

namespace smallsum {

using Json = nlohmann::json;

// Elements are written as digit tuples, sets as lists of tuples plus the hex
// mask under "hex" where an object is produced.

Json json_of(const GroupSpec& g);
Json json_of(const GroupSpec& g, Element x);
Json json_of(const SubsetMask& s);
Json json_of(const Subgroup& h);
Json json_of(const ConnectivityReport& r, bool with_fragments = true);
Json json_of(const DegeneracyResult& d);
Json json_of(const MatchingAssignment& m);
Json json_of(const GroupSpec& g, const ProgressionWitness& w);
Json json_of(const HDecomposition& d);
Json json_of(const EssentialPairWitness& w);
Json json_of(const QuasiPeriodicPartition& p);
Json json_of(const CaseWitness& w, const GroupSpec& g);
Json json_of(const StructureVerdict& v);
Json json_of(const PairInstance& p);
Json json_of(const Counterexample& c);
/// The trailing summary object of a report; JSONL output writes the
/// violations on their own lines and leaves them out here.
Json json_of(const VerificationReport& r, bool with_violations = true);

/// Factor list from [2,2,3], "2,2,3" or 6.
GroupSpec group_from_json(const Json& j);

/// An element from a digit tuple or an index.
Element element_from_json(const GroupSpec& g, const Json& j);

/// A set from a list of elements or a "0x..." mask.
SubsetMask set_from_json(const GroupSpec& g, const Json& j);

/// Parses a set literal: a JSON list of tuples or indices, a hex mask, or
/// comma-separated tuples without the outer brackets such as "[[0]],[[1]]".
SubsetMask parse_set(const GroupSpec& g, const std::string& literal);

/// {"group": [...], "S": [...], "T": [...], "mu": 0}; T and mu optional.
PairInstance instance_from_json(const Json& j);

}  // namespace smallsum
