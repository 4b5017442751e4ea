/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <filesystem>
#include <string>

#include "mgrisk/analysis.hpp"

namespace fixtures {

inline std::filesystem::path data(const std::string& name) { return std::filesystem::path(MGRISK_DATA_DIR) / name; }

/// Shipped IEEE13 fixture with its risk and SVI tables.
inline mgrisk::Scenario ieee13(bool widespread = false) {
    return mgrisk::load_scenario(data(widespread ? "ieee13_widespread.json" : "ieee13.json"), data("ieee13_risk.csv"),
                                 data("ieee13_svi.csv"));
}

inline mgrisk::OmcpInstance instance(const mgrisk::Scenario& sc, mgrisk::Objective obj, mgrisk::Controllability ctrl,
                                     double threshold, mgrisk::InstanceOptions opt = {}) {
    return mgrisk::make_instance(sc.net, sc.bg, obj, ctrl, threshold, opt);
}

}  // namespace fixtures
