#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "orlicz/mult_operator.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/theorem_harness.hpp"
#include "orlicz/weighted.hpp"

namespace orlicz::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Reads and parses a JSON file. Throws ConfigError naming the file.
Json load_json(const std::filesystem::path& path);

// Descriptors. Every parser throws ConfigError whose field() is a JSON pointer below `at`.
// Unknown keys are rejected so typos do not silently fall back to defaults.

/// {"family":"power","p":2,"c":1} | {"family":"exp_minus"} | {"family":"power_log","p":2}
/// | {"family":"tabulated","knots":[[x,y],...]}
OrliczFunction parse_phi(const Json& j, const std::string& at = "");

/// {"atoms":[{"id":"a","mass":1}], "segment":{"length":1,"depth":3},
///  "family":{"mass":{"rule":"geometric","m":0.5,"r":0.5},"truncation":64}}
SpacePtr parse_space(const Json& j, const std::string& at = "");

/// {"atoms":{"a":2.5}, "cells":[{"from":0,"to":4,"value":1}], "family":<rule> | [{"from":1,"to":null,<rule>}]}
/// with <rule> = {"rule":"constant"|"harmonic"|"geometric"|"general","c":..,"rho":..,"decay":..}.
/// Pieces not mentioned are zero; "constant": c sets every piece to c.
SimpleFunction parse_function(const Json& j, const SpacePtr& space, const std::string& at = "");

/// {"atoms":["a"], "cells":[[0,4]], "family":[[1,null]]}; "all": true selects every piece.
PieceSet parse_set(const Json& j, const SpacePtr& space, const std::string& at = "");

/// {"atoms":{"a":"b"}, "cells":"identity" | {"constant":k} | [k0,k1,...], "family_shift":0}
WeightedStructure parse_tau(const Json& j, const SpacePtr& space, const std::string& at = "");

// Reports.

/// Finite doubles as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
Json number(double x);
Json to_json(const PieceSet& set);
Json to_json(const OrliczFunction& phi);
Json to_json(const NormResult& r);
Json to_json(const Delta2Report& r);
Json to_json(const CompactReport& r);
Json to_json(const OperatorReport& r);
Json to_json(const SpikeSequence& s);
Json to_json(const PairingDecay& p);
Json to_json(const SuiteReport& r);

/// Sorted keys, two-space indent, doubles with 17 significant digits, trailing newline.
std::string dump(const Json& j);

}  // namespace orlicz::io
