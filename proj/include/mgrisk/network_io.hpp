/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mgrisk/network.hpp"

namespace mgrisk {

/// Reads and validates a network description (JSON schema documented in
/// docs/network_schema.md). Throws NetworkError.
NetworkModel parse_network(const std::filesystem::path& path);
NetworkModel parse_network_json(std::string_view text);

/// Emits top-level keys in schema order: base_kv, base_kva, buses, lines,
/// switches, loads, sources, transformers.
std::string serialize_network(const NetworkModel& net);
void write_network(const NetworkModel& net, const std::filesystem::path& path);

}  // namespace mgrisk
