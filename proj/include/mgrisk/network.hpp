/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mgrisk/phase.hpp"

namespace mgrisk {

enum class NetworkErrorKind {
    schema,
    invalid_value,
    duplicate_id,
    dangling_reference,
    multiple_substations,
    disconnected,
    non_radial,
};

class NetworkError : public std::runtime_error {
 public:
    NetworkError(NetworkErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    NetworkErrorKind kind() const { return kind_; }

 private:
    NetworkErrorKind kind_;
};

/// Dense square matrix over a line's own phase set, row-major.
struct PhaseMatrix {
    int dim = 0;
    std::vector<double> values;

    PhaseMatrix() = default;
    explicit PhaseMatrix(int n) : dim(n), values(static_cast<std::size_t>(n * n), 0.0) {}

    double operator()(int i, int j) const { return values[static_cast<std::size_t>(i * dim + j)]; }
    double& operator()(int i, int j) { return values[static_cast<std::size_t>(i * dim + j)]; }
    bool is_symmetric(double tol = 1e-12) const;
    bool operator==(const PhaseMatrix&) const = default;
};

struct Bus {
    std::string id;
    PhaseSet phases;
    double vmin = 0.95;  // pu
    double vmax = 1.05;  // pu
    bool is_substation = false;
    std::string metadata;  // opaque JSON text, empty when absent

    bool operator==(const Bus&) const = default;
};

struct LineSegment {
    std::string id;
    std::string from_bus;
    std::string to_bus;
    PhaseSet phases;
    PhaseMatrix r;  // ohm
    PhaseMatrix x;  // ohm
    double s_max = 0.0;   // kVA per phase
    double length = 0.0;  // m, informational

    bool operator==(const LineSegment&) const = default;
};

struct SwitchElement {
    std::string id;
    std::string from_bus;
    std::string to_bus;
    PhaseSet phases;
    bool normally_open = false;
    double risk = 0.0;
    double s_max = 0.0;  // kVA per phase

    bool operator==(const SwitchElement&) const = default;
};

struct LoadPoint {
    std::string id;
    std::string bus;
    PhaseValues pd;  // kW
    PhaseValues qd;  // kvar, same phases as pd
    double svi = 0.0;

    PhaseSet phases() const { return pd.phases; }
    bool operator==(const LoadPoint&) const = default;
};

enum class SourceKind { solar, storage, generator, substation_source };

std::string_view to_string(SourceKind k);
std::optional<SourceKind> source_kind_from_string(std::string_view s);

struct DistributedSource {
    std::string id;
    std::string bus;
    PhaseValues pmax;  // kW
    PhaseValues qmin;  // kvar
    PhaseValues qmax;  // kvar
    bool can_grid_form = false;
    SourceKind kind = SourceKind::solar;

    PhaseSet phases() const { return pmax.phases; }
    /// Substation sources are always grid-forming.
    bool forming_capable() const { return can_grid_form || kind == SourceKind::substation_source; }
    /// Storage and the substation may absorb power; other kinds only inject.
    double pmin(Phase p) const {
        return (kind == SourceKind::storage || kind == SourceKind::substation_source) ? -pmax[p] : 0.0;
    }
    bool operator==(const DistributedSource&) const = default;
};

struct TransformerElement {
    std::string id;
    std::string from_bus;
    std::string to_bus;
    bool is_distribution_xfmr = false;

    bool operator==(const TransformerElement&) const = default;
};

/// Raw, editable network description. Becomes a NetworkModel once validated.
struct NetworkData {
    double base_kv = 1.0;    // line-to-neutral kV
    double base_kva = 1000;  // per-phase kVA
    std::vector<Bus> buses;
    std::vector<LineSegment> lines;
    std::vector<SwitchElement> switches;
    std::vector<LoadPoint> loads;
    std::vector<DistributedSource> sources;
    std::vector<TransformerElement> transformers;

    bool operator==(const NetworkData&) const = default;
};

enum class EdgeKind { line, switch_, transformer };

/// Bus-level connection (line, switch or transformer) with resolved indices.
struct Edge {
    EdgeKind kind;
    std::size_t element;  // index into lines/switches/transformers
    std::size_t from;     // bus index
    std::size_t to;       // bus index
    PhaseSet phases;
};

/// Validated, immutable feeder model.
class NetworkModel {
 public:
    /// Validates every invariant; throws NetworkError naming the offending element.
    static NetworkModel from_data(NetworkData data);

    const NetworkData& data() const { return data_; }
    double base_kv() const { return data_.base_kv; }
    double base_kva() const { return data_.base_kva; }
    /// Ohms per unit impedance.
    double z_base() const { return data_.base_kv * data_.base_kv * 1000.0 / data_.base_kva; }

    const std::vector<Bus>& buses() const { return data_.buses; }
    const std::vector<LineSegment>& lines() const { return data_.lines; }
    const std::vector<SwitchElement>& switches() const { return data_.switches; }
    const std::vector<LoadPoint>& loads() const { return data_.loads; }
    const std::vector<DistributedSource>& sources() const { return data_.sources; }
    const std::vector<TransformerElement>& transformers() const { return data_.transformers; }

    std::optional<std::size_t> bus_index(std::string_view id) const;
    std::size_t substation_bus() const { return substation_; }
    /// Index of the substation voltage source, if the model has one.
    std::optional<std::size_t> substation_source() const { return substation_source_; }

    /// Lines, switches, then transformers, in file order.
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_of_switch(std::size_t sw) const { return data_.lines.size() + sw; }

    const std::vector<std::size_t>& loads_at(std::size_t bus) const { return loads_at_[bus]; }
    const std::vector<std::size_t>& sources_at(std::size_t bus) const { return sources_at_[bus]; }
    std::size_t load_bus(std::size_t load) const { return load_bus_[load]; }
    std::size_t source_bus(std::size_t src) const { return source_bus_[src]; }

    double total_pd() const;
    double total_qd() const;
    double total_svi() const;

 private:
    NetworkModel() = default;
    void index();

    NetworkData data_;
    std::map<std::string, std::size_t, std::less<>> bus_ids_;
    std::size_t substation_ = 0;
    std::optional<std::size_t> substation_source_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> loads_at_;
    std::vector<std::vector<std::size_t>> sources_at_;
    std::vector<std::size_t> load_bus_;
    std::vector<std::size_t> source_bus_;
};

}  // namespace mgrisk
