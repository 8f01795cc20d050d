#pragma once

// Canonical JSON layouts for the table types and certificates.
// BehaviorTable: {"p": nested arrays in index order a,b,x,y}.
// JointTable:    {"p": nested arrays in index order c,a,d,b,x,y}.
// MarginalBundle: {"pcd": [c][d][x][y], "pa": [a][x][c], "pb": [b][y][c][d]}.
// Outcome indices map +1 -> 0 and -1 -> 1 everywhere.

#include <json.hpp>

#include "cf/causal.hpp"
#include "cf/polytope.hpp"

namespace cf {

using json = nlohmann::json;

json to_json(const BehaviorTable& bt);
BehaviorTable behavior_from_json(const json& j);

json to_json(const JointTable& t);
json to_json(const MarginalBundle& b);
json to_json(const AssumptionReport& rep);
json to_json(const MembershipCertificate& cert);
json to_json(const SignallingReport& rep);
json to_json(const NoSignallingReport& rep);
json to_json(const TimeSymmetryReport& rep);
json to_json(const BlochVector& n);

}  // namespace cf
