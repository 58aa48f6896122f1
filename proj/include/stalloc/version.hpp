#pragma once

namespace stalloc {

inline constexpr const char* kEngineVersion = "stalloc-0.1.0";

// Identifier of the random number algorithm, recorded in every manifest and
// snapshot so results can be tied to the exact stream definition.
inline constexpr const char* kRngId = "splitmix64-v1";

}  // namespace stalloc
