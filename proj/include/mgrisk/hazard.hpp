/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mgrisk/block_graph.hpp"
#include "mgrisk/network.hpp"

namespace mgrisk {

class HazardError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Component id -> wildfire risk index. The 0..150 range is advisory:
/// larger values load with a warning.
struct RiskTable {
    std::map<std::string, double> values;
    std::vector<std::string> warnings;
};

/// Load id -> SVI contribution.
struct SviTable {
    std::map<std::string, double> values;
    std::vector<std::string> warnings;
};

/// CSV with header `id,value`. Throws HazardError on malformed rows,
/// negative values and duplicate ids.
RiskTable load_risk_csv(const std::filesystem::path& path);
SviTable load_svi_csv(const std::filesystem::path& path);
RiskTable parse_risk_csv(std::string_view text);
SviTable parse_svi_csv(std::string_view text);

struct RiskAggregation {
    std::vector<double> bus;     // per bus, includes collapsed secondary components
    std::vector<double> line;    // per line
    std::vector<double> switch_; // per switch
    std::vector<double> transformer;

    /// rho_i: max over the block's buses and internal lines/transformers.
    std::vector<double> block_risk(const NetworkModel& net, const BlockGraph& bg) const;
};

/// Every line and switch needs an entry; buses and transformers default to 0.
/// Ids removed by reduce_feeder are accepted when `absorbed` maps them to a
/// surviving bus, and fold into that bus by maximum.
RiskAggregation aggregate_risk(const NetworkModel& net, const RiskTable& rt,
                               const std::map<std::string, std::string>& absorbed = {});

/// v_i = sum of SVI over the block's loads. Every load needs an entry, either
/// directly or through the original loads merged into it (`load_aggregate`).
std::vector<double> aggregate_svi(const NetworkModel& net, const BlockGraph& bg, const SviTable& st,
                                  const std::map<std::string, std::string>& load_aggregate = {});

/// Re-keys tables written against a full feeder onto its reduced form:
/// absorbed component risk folds into the surviving bus by maximum, and
/// merged load SVI sums onto the aggregate load.
RiskTable remap_risk(const RiskTable& rt, const std::map<std::string, std::string>& absorbed);
SviTable remap_svi(const SviTable& st, const std::map<std::string, std::string>& load_aggregate);

}  // namespace mgrisk
