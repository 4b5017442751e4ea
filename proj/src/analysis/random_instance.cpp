/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mgrisk/random_instance.hpp"

#include <cmath>
#include <random>

#include <fmt/core.h>

namespace mgrisk {

namespace {

class Draw {
 public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    /// Uniform on [lo, hi] rounded to one decimal.
    double tenth(double lo, double hi) { return std::round(real(lo, hi) * 10.0) / 10.0; }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

 private:
    std::mt19937_64 rng_;
};

PhaseValues three_phase(double a, double b, double c) {
    PhaseValues v;
    v.set(Phase::a, a);
    v.set(Phase::b, b);
    v.set(Phase::c, c);
    return v;
}

LineSegment random_line(Draw& d, std::string id, std::string from, std::string to) {
    LineSegment l;
    l.id = std::move(id);
    l.from_bus = std::move(from);
    l.to_bus = std::move(to);
    l.phases = PhaseSet::all();
    l.r = PhaseMatrix(3);
    l.x = PhaseMatrix(3);
    const double r = d.real(0.02, 0.12), x = d.real(0.04, 0.25);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            l.r(i, j) = i == j ? r : 0.35 * r;
            l.x(i, j) = i == j ? x : 0.4 * x;
        }
    l.length = std::round(d.real(50, 800));
    return l;
}

LoadPoint random_load(Draw& d, std::string id, std::string bus, double max_kw) {
    LoadPoint l;
    l.id = std::move(id);
    l.bus = std::move(bus);
    for (Phase p : kAllPhases) {
        const double kw = d.chance(0.8) ? std::round(d.real(0, max_kw)) : 0.0;
        l.pd.set(p, kw);
        l.qd.set(p, std::round(0.3 * kw * 10.0) / 10.0);
    }
    return l;
}

DistributedSource source(std::string id, std::string bus, SourceKind kind, double pmax, bool forming) {
    DistributedSource s;
    s.id = std::move(id);
    s.bus = std::move(bus);
    s.kind = kind;
    s.can_grid_form = forming;
    s.pmax = three_phase(pmax, pmax, pmax);
    s.qmin = three_phase(-pmax, -pmax, -pmax);
    s.qmax = three_phase(pmax, pmax, pmax);
    return s;
}

Bus bus(std::string id, bool substation) {
    Bus b;
    b.id = std::move(id);
    b.phases = PhaseSet::all();
    b.is_substation = substation;
    return b;
}

}  // namespace

RandomInstance random_instance(const RandomInstanceOptions& opt) {
    Draw d(opt.seed);
    RandomInstance out;
    NetworkData& n = out.network;
    n.base_kv = 2.401777;
    n.base_kva = 1000;

    const int nblocks = d.integer(opt.min_blocks, opt.max_blocks);
    std::vector<std::vector<std::string>> block_buses(static_cast<std::size_t>(nblocks));
    for (int k = 0; k < nblocks; ++k) {
        auto& names = block_buses[static_cast<std::size_t>(k)];
        const int nbus = d.integer(1, opt.max_buses_per_block);
        for (int j = 0; j < nbus; ++j) {
            names.push_back(fmt::format("n{}_{}", k, j));
            n.buses.push_back(bus(names.back(), k == 0 && j == 0));
            if (j > 0) {
                LineSegment l = random_line(d, fmt::format("l{}_{}", k, j), names[static_cast<std::size_t>(d.integer(0, j - 1))],
                                            names.back());
                if (d.chance(0.3)) l.s_max = std::round(d.real(100, 1500));
                out.risk.values[l.id] = d.tenth(0, 150);
                n.lines.push_back(std::move(l));
            }
            if (d.chance(0.5)) out.risk.values[names.back()] = d.tenth(0, 150);
            if (d.chance(0.7)) {
                LoadPoint l = random_load(d, fmt::format("load_{}_{}", k, j), names.back(), 150);
                l.svi = d.tenth(0, 10);
                out.svi.values[l.id] = l.svi;
                n.loads.push_back(std::move(l));
            }
        }
    }

    auto pick = [&](int k) {
        const auto& names = block_buses[static_cast<std::size_t>(k)];
        return names[static_cast<std::size_t>(d.integer(0, static_cast<int>(names.size()) - 1))];
    };
    auto add_switch = [&](int a, int b) {
        SwitchElement s;
        s.id = fmt::format("sw{}", n.switches.size() + 1);
        s.from_bus = pick(a);
        s.to_bus = pick(b);
        s.phases = PhaseSet::all();
        s.risk = d.tenth(0, 100);
        out.risk.values[s.id] = s.risk;
        n.switches.push_back(std::move(s));
    };
    // A spanning tree of switches keeps the feeder connected; extra ones add loops.
    for (int k = 1; k < nblocks && static_cast<int>(n.switches.size()) < opt.max_switches; ++k)
        add_switch(d.integer(0, k - 1), k);
    const int extra = d.integer(0, std::max(0, opt.max_switches - static_cast<int>(n.switches.size())));
    for (int e = 0; e < extra && nblocks > 1; ++e) {
        const int a = d.integer(0, nblocks - 1);
        int b = d.integer(0, nblocks - 2);
        if (b >= a) ++b;
        add_switch(a, b);
    }

    const double big = opt.unbounded_generation ? 1e5 : 5000;
    n.sources.push_back(source("vsource", "n0_0", SourceKind::substation_source, big, true));
    for (int k = 0; k < nblocks; ++k) {
        if (k > 0 && d.chance(0.6)) {
            const bool gen = d.chance(0.3);
            const double pmax = opt.unbounded_generation ? 1e5 : std::round(d.real(0, 200));
            n.sources.push_back(source(fmt::format("{}_{}", gen ? "gen" : "bess", k), pick(k),
                                       gen ? SourceKind::generator : SourceKind::storage, pmax, true));
        }
        if (d.chance(0.3))
            n.sources.push_back(
                source(fmt::format("pv_{}", k), pick(k), SourceKind::solar, std::round(d.real(0, 60)), false));
    }

    double total = 0;
    for (const auto& [id, v] : out.risk.values) total += v;
    if (total <= 0) out.risk.values["n0_0"] = 1.0;
    return out;
}

NetworkData random_radial_island(std::uint64_t seed, int buses) {
    Draw d(seed);
    NetworkData n;
    n.base_kv = 2.401777;
    n.base_kva = 1000;
    for (int i = 0; i < buses; ++i) {
        n.buses.push_back(bus(fmt::format("i{}", i), i == 0));
        n.buses.back().vmin = 0.8;
        n.buses.back().vmax = 1.2;
        if (i > 0)
            n.lines.push_back(random_line(d, fmt::format("li{}", i), fmt::format("i{}", d.integer(0, i - 1)),
                                          fmt::format("i{}", i)));
        if (d.chance(0.8)) n.loads.push_back(random_load(d, fmt::format("ld{}", i), fmt::format("i{}", i), 300));
        if (i > 0 && d.chance(0.25))
            n.sources.push_back(source(fmt::format("pv{}", i), fmt::format("i{}", i), SourceKind::solar,
                                       std::round(d.real(0, 100)), false));
    }
    n.sources.push_back(source("vsource", "i0", SourceKind::substation_source, 20000, true));
    return n;
}

}  // namespace mgrisk
