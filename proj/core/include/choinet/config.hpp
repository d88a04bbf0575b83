#pragma once

// Versioned JSON network descriptions.
//
// Complex matrices are nested row-major arrays of [re, im] pairs; dims are listed
// explicitly, factor 0 first. Layout:
//
//   {
//     "version": 1,
//     "subject": {"kind": "state", "state": STATE}
//             | {"kind": "measurement", "povm": POVM, "omega0": STATE, "xi0": STATE},
//     "left_blocks":  [{"povm": POVM, "state": STATE}, ...],
//     "right_blocks": [{"povm": POVM, "state": STATE}, ...],
//     "options": {"tolerances": {"herm": .., "psd": .., ...}, "seed": 1, "tuple_cap": 4096}
//   }
//   STATE = {"dims": [d0, d1], "matrix": MATRIX}
//   POVM  = {"dims": [d0, d1], "effects": [MATRIX, ...]}
//
// Blocks are oriented from the subject outward on both sides.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "choinet/network.hpp"

namespace choinet {

struct ConfigOptions {
  std::optional<Tolerances> tolerances;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> tuple_cap;
};

struct NetworkConfig {
  int version = 1;
  LineNetwork network;
  ConfigOptions options;
};

inline constexpr int kConfigVersion = 1;

/// Throws ParseError (with a JSON-pointer field path, or the line/column of a
/// syntax error) and ValidationError (naming the invariant and the field).
NetworkConfig parse_network_config(std::string_view text);
NetworkConfig load_network_config(const std::filesystem::path& path);

std::string dump_network_config(const NetworkConfig& config);
void save_network_config(const NetworkConfig& config, const std::filesystem::path& path);

/// load_network_config(path).network
LineNetwork load_network(const std::filesystem::path& path);

/// A standalone {"version": 1, "state": STATE} document.
QuantumState parse_state_document(std::string_view text);
QuantumState load_state(const std::filesystem::path& path);

}  // namespace choinet
