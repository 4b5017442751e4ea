/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mgrisk/solver.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include <fmt/core.h>

namespace mgrisk {

std::shared_ptr<const IslandOracle::Result> IslandOracle::evaluate(const BlockGraph& bg, const Island& island) {
    Key key{*island.forming_source, island.switches, island.blocks};
    {
        std::lock_guard lock(mu_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    auto res = std::make_shared<Result>();
    res->dispatch = solve_dispatch(*net_, bg, {island}, {1});
    res->status = res->dispatch.status;
    std::lock_guard lock(mu_);
    ++solves_;
    return cache_.emplace(std::move(key), std::move(res)).first->second;
}

std::size_t IslandOracle::lp_solves() const {
    std::lock_guard lock(mu_);
    return solves_;
}

std::size_t IslandOracle::cache_size() const {
    std::lock_guard lock(mu_);
    return cache_.size();
}

double cost_tolerance(const OmcpInstance& inst) {
    double s = 0.0;
    for (double c : inst.block_cost) s += std::abs(c);
    return 1e-9 * (1.0 + s);
}

namespace {

std::vector<std::size_t> closed_list(const std::vector<char>& closed) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < closed.size(); ++i)
        if (closed[i]) out.push_back(i);
    return out;
}

struct FreeVar {
    bool is_switch;
    std::size_t index;
};

// Everything a leaf needs once its switch and inverter states are fixed.
struct LeafIslands {
    struct Option {
        std::vector<std::size_t> blocks;
        double cost = 0.0;
        double risk = 0.0;
    };
    std::vector<Option> options;  // energizable islands
    double switch_risk = 0.0;
};

class Evaluator {
 public:
    Evaluator(const OmcpInstance& inst, IslandOracle& oracle, std::vector<std::string>* diag)
        : inst_(inst), oracle_(oracle), diag_(diag) {}

    /// Energizable islands of a topology; false when the topology itself is inadmissible.
    bool islands(const std::vector<char>& closed, const std::vector<char>& forming, LeafIslands& out) {
        const BlockGraph& bg = inst_.bg;
        IslandSet is = islands_for(bg, closed, forming);
        if (!is.feasible()) return false;
        out.options.clear();
        out.switch_risk = 0.0;
        if (inst_.policy.include_switch_risk)
            for (std::size_t i = 0; i < closed.size(); ++i)
                if (closed[i]) out.switch_risk += bg.edges[i].risk;
        if (!inst_.within_budget(out.switch_risk)) return false;
        for (const Island& isl : is.islands) {
            if (!isl.energized()) continue;
            auto r = oracle_.evaluate(bg, isl);
            if (r->status == LpStatus::numerical_failure && diag_)
                diag_->push_back(fmt::format("dispatch LP numerical failure on island with forming source '{}'",
                                             bg.source_id(*isl.forming_source)));
            if (r->status != LpStatus::optimal) continue;
            LeafIslands::Option o;
            o.blocks = isl.blocks;
            for (std::size_t b : isl.blocks) {
                o.risk += bg.blocks[b].risk;
                o.cost += inst_.block_cost[b];
            }
            out.options.push_back(std::move(o));
        }
        return true;
    }

 private:
    const OmcpInstance& inst_;
    IslandOracle& oracle_;
    std::vector<std::string>* diag_;
};

std::vector<FreeVar> branch_order(const OmcpInstance& inst) {
    std::vector<FreeVar> vars;
    std::vector<std::size_t> sw;
    for (std::size_t i = 0; i < inst.switch_domain.size(); ++i)
        if (inst.switch_domain[i] == Domain::free) sw.push_back(i);
    auto adjacency = [&](std::size_t i) {
        const BlockEdge& e = inst.bg.edges[i];
        return inst.bg.blocks[e.a].total_pd + (e.a == e.b ? 0.0 : inst.bg.blocks[e.b].total_pd);
    };
    std::stable_sort(sw.begin(), sw.end(), [&](std::size_t x, std::size_t y) { return adjacency(x) > adjacency(y); });
    for (std::size_t i : sw) vars.push_back({true, i});
    for (std::size_t s = 0; s < inst.inverter_domain.size(); ++s)
        if (inst.inverter_domain[s] == Domain::free) vars.push_back({false, s});
    return vars;
}

void initial_state(const OmcpInstance& inst, std::vector<char>& closed, std::vector<char>& forming) {
    closed.assign(inst.switch_domain.size(), 0);
    forming.assign(inst.inverter_domain.size(), 0);
    for (std::size_t i = 0; i < closed.size(); ++i) closed[i] = inst.switch_domain[i] == Domain::fixed_on;
    for (std::size_t s = 0; s < forming.size(); ++s) forming[s] = inst.inverter_domain[s] == Domain::fixed_on;
}

class BranchAndBound {
 public:
    BranchAndBound(const OmcpInstance& inst, const SolveOptions& opt, IslandOracle& oracle, SolveReport& rep)
        : inst_(inst), opt_(opt), rep_(rep), eval_(inst, oracle, &rep.diagnostics), tol_(cost_tolerance(inst)) {
        vars_ = branch_order(inst);
        initial_state(inst, closed_, forming_);
        sw_decided_.assign(closed_.size(), 0);
        inv_decided_.assign(forming_.size(), 0);
        for (std::size_t i = 0; i < closed_.size(); ++i) sw_decided_[i] = inst.switch_domain[i] != Domain::free;
        for (std::size_t s = 0; s < forming_.size(); ++s) inv_decided_[s] = inst.inverter_domain[s] != Domain::free;
    }

    void run() { descend(0); }
    bool found() const { return found_; }
    const EnumeratedConfiguration& incumbent() const { return best_; }

 private:
    // Shed cost of blocks that no completion of the current node can energize.
    // Returns false when no completion is admissible at all.
    bool bound(double& lb) const {
        const BlockGraph& bg = inst_.bg;
        double sw_risk = 0.0;
        if (inst_.policy.include_switch_risk)
            for (std::size_t i = 0; i < closed_.size(); ++i)
                if (sw_decided_[i] && closed_[i]) sw_risk += bg.edges[i].risk;
        if (!inst_.within_budget(sw_risk)) return false;
        const double remaining = (inst_.policy.threshold + 1e-12) * inst_.policy.total - sw_risk;

        std::vector<char> reach(bg.size(), 0);
        std::vector<std::size_t> stack;
        for (std::size_t s = 0; s < forming_.size(); ++s) {
            if (!bg.is_forming_capable(s)) continue;
            if (inv_decided_[s] && !forming_[s]) continue;
            const std::size_t b = bg.block_of_source(s);
            if (!reach[b]) {
                reach[b] = 1;
                stack.push_back(b);
            }
        }
        while (!stack.empty()) {
            const std::size_t b = stack.back();
            stack.pop_back();
            for (std::size_t i = 0; i < bg.edges.size(); ++i) {
                if (sw_decided_[i] && !closed_[i]) continue;
                const BlockEdge& e = bg.edges[i];
                std::size_t o;
                if (e.a == b) o = e.b;
                else if (e.b == b) o = e.a;
                else continue;
                if (!reach[o]) {
                    reach[o] = 1;
                    stack.push_back(o);
                }
            }
        }
        lb = 0.0;
        for (std::size_t b = 0; b < bg.size(); ++b)
            if (!reach[b] || bg.blocks[b].risk > remaining) lb += inst_.block_cost[b];
        return true;
    }

    void descend(std::size_t depth) {
        ++rep_.nodes;
        double lb = 0.0;
        if (!bound(lb)) return;
        if (opt_.pruning && found_ && lb > best_.shed_cost + tol_) return;
        if (depth == vars_.size()) {
            leaf();
            return;
        }
        const FreeVar v = vars_[depth];
        auto& state = v.is_switch ? closed_ : forming_;
        auto& decided = v.is_switch ? sw_decided_ : inv_decided_;
        decided[v.index] = 1;
        for (char value : {char{0}, char{1}}) {
            state[v.index] = value;
            descend(depth + 1);
        }
        state[v.index] = 0;
        decided[v.index] = 0;
    }

    void leaf() {
        ++rep_.leaves;
        if (closed_ != last_topology_ || rep_.leaves == 1) {
            ++rep_.topologies_evaluated;
            last_topology_ = closed_;
        }
        LeafIslands li;
        if (!eval_.islands(closed_, forming_, li)) return;

        const std::size_t k = li.options.size();
        EnumeratedConfiguration cand;
        cand.switch_closed = closed_;
        cand.forming = forming_;
        std::vector<char> take(k, 0);
        // Exhaustive choice of energized islands with cost pruning.
        auto visit = [&](auto&& self, std::size_t j, double shed_lb, double risk) -> void {
            if (opt_.pruning && found_ && shed_lb > best_.shed_cost + tol_) return;
            if (j == k) {
                cand.block_energized.assign(inst_.bg.size(), 0);
                for (std::size_t t = 0; t < k; ++t)
                    if (take[t])
                        for (std::size_t b : li.options[t].blocks) cand.block_energized[b] = 1;
                cand.risk = absolute_risk(cand.block_energized, closed_, inst_.bg, inst_.policy.include_switch_risk);
                if (!inst_.within_budget(cand.risk)) return;
                cand.shed_cost = shed_cost(cand.block_energized, inst_.block_cost);
                if (!found_ || configuration_less(cand, best_, tol_)) {
                    best_ = cand;
                    found_ = true;
                }
                return;
            }
            take[j] = 0;
            self(self, j + 1, shed_lb + li.options[j].cost, risk);
            if (inst_.within_budget(risk + li.options[j].risk)) {
                take[j] = 1;
                self(self, j + 1, shed_lb, risk + li.options[j].risk);
                take[j] = 0;
            }
        };
        // Blocks outside every energizable island are shed regardless.
        std::vector<char> coverable(inst_.bg.size(), 0);
        for (const auto& o : li.options)
            for (std::size_t b : o.blocks) coverable[b] = 1;
        double base = 0.0;
        for (std::size_t b = 0; b < inst_.bg.size(); ++b)
            if (!coverable[b]) base += inst_.block_cost[b];
        visit(visit, 0, base, li.switch_risk);
    }

    const OmcpInstance& inst_;
    const SolveOptions& opt_;
    SolveReport& rep_;
    Evaluator eval_;
    double tol_;
    std::vector<FreeVar> vars_;
    std::vector<char> closed_, forming_, sw_decided_, inv_decided_, last_topology_;
    bool found_ = false;
    EnumeratedConfiguration best_;
};

DispatchSolution merge_dispatch(const NetworkModel& net, const std::vector<const DispatchSolution*>& parts) {
    DispatchSolution out;
    out.feasible = true;
    out.status = LpStatus::optimal;
    out.pg.assign(net.sources().size(), PhaseValues{});
    out.qg.assign(net.sources().size(), PhaseValues{});
    out.p.assign(net.edges().size(), PhaseValues{});
    out.q.assign(net.edges().size(), PhaseValues{});
    out.w.assign(net.buses().size(), PhaseValues{});
    out.bus_energized.assign(net.buses().size(), 0);
    for (const DispatchSolution* d : parts) {
        for (std::size_t i = 0; i < out.pg.size(); ++i)
            if (!d->pg[i].phases.empty()) out.pg[i] = d->pg[i], out.qg[i] = d->qg[i];
        for (std::size_t i = 0; i < out.p.size(); ++i)
            if (!d->p[i].phases.empty()) out.p[i] = d->p[i], out.q[i] = d->q[i];
        for (std::size_t i = 0; i < out.w.size(); ++i)
            if (d->bus_energized[i]) out.w[i] = d->w[i], out.bus_energized[i] = 1;
    }
    return out;
}

}  // namespace

bool configuration_less(const EnumeratedConfiguration& a, const EnumeratedConfiguration& b, double cost_tol) {
    if (a.shed_cost < b.shed_cost - cost_tol) return true;
    if (a.shed_cost > b.shed_cost + cost_tol) return false;
    const auto ca = closed_list(a.switch_closed), cb = closed_list(b.switch_closed);
    if (ca.size() != cb.size()) return ca.size() < cb.size();
    if (ca != cb) return ca < cb;
    if (a.forming != b.forming) return a.forming < b.forming;
    if (a.risk != b.risk) return a.risk < b.risk;
    return a.block_energized < b.block_energized;
}

SolveReport solve(const OmcpInstance& inst, const SolveOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t nfree = inst.free_binaries();
    if (nfree > opt.max_binaries)
        throw CeilingExceeded(fmt::format(
            "{} free binaries exceed the exact solver ceiling of {}; export the MILP instead", nfree,
            opt.max_binaries));
    auto oracle = opt.oracle ? opt.oracle : std::make_shared<IslandOracle>(inst.net);
    const std::size_t solves_before = oracle->lp_solves();

    SolveReport rep;
    BranchAndBound bb(inst, opt, *oracle, rep);
    bb.run();
    if (!bb.found()) throw SolverError("no admissible configuration (fixed switch states exceed the risk budget)");

    const EnumeratedConfiguration& best = bb.incumbent();
    Configuration& c = rep.best;
    c.switch_closed = best.switch_closed;
    c.forming = best.forming;
    c.block_energized = best.block_energized;
    IslandSet is = islands_for(inst.bg, c.switch_closed, c.forming);
    std::vector<std::shared_ptr<const IslandOracle::Result>> keep;
    std::vector<const DispatchSolution*> parts;
    for (const Island& isl : is.islands) {
        if (!isl.energized() || !c.block_energized[isl.blocks.front()]) continue;
        keep.push_back(oracle->evaluate(inst.bg, isl));
        parts.push_back(&keep.back()->dispatch);
    }
    c.islands = std::move(is.islands);
    c.dispatch = merge_dispatch(*inst.net, parts);
    c.risk = best.risk;
    c.risk_fraction = best.risk / inst.policy.total;

    rep.optimal = true;
    rep.shed_cost = best.shed_cost;
    rep.metrics = objective_value(c.block_energized, inst.objective, inst.bg);
    rep.vulnerability = vulnerability_stats(c.block_energized, inst.bg);
    rep.lp_solves = oracle->lp_solves() - solves_before;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

Enumeration enumerate_all(const OmcpInstance& inst, std::shared_ptr<IslandOracle> oracle) {
    const std::size_t nfree = inst.free_binaries();
    if (nfree > 20) throw CeilingExceeded(fmt::format("enumeration limited to 20 free binaries, got {}", nfree));
    if (!oracle) oracle = std::make_shared<IslandOracle>(inst.net);

    std::vector<FreeVar> vars;
    std::size_t nsw = 0;
    for (std::size_t i = 0; i < inst.switch_domain.size(); ++i)
        if (inst.switch_domain[i] == Domain::free) vars.push_back({true, i}), ++nsw;
    for (std::size_t s = 0; s < inst.inverter_domain.size(); ++s)
        if (inst.inverter_domain[s] == Domain::free) vars.push_back({false, s});

    Enumeration out;
    out.topologies = std::size_t{1} << nsw;
    Evaluator eval(inst, *oracle, nullptr);
    std::vector<char> closed, forming;
    const double tol = cost_tolerance(inst);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask) {
        initial_state(inst, closed, forming);
        for (std::size_t j = 0; j < vars.size(); ++j) {
            const char v = static_cast<char>((mask >> j) & 1u);
            (vars[j].is_switch ? closed : forming)[vars[j].index] = v;
        }
        LeafIslands li;
        if (!eval.islands(closed, forming, li)) continue;
        const std::size_t k = li.options.size();
        for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << k); ++sub) {
            EnumeratedConfiguration c;
            c.switch_closed = closed;
            c.forming = forming;
            c.block_energized.assign(inst.bg.size(), 0);
            for (std::size_t t = 0; t < k; ++t)
                if ((sub >> t) & 1u)
                    for (std::size_t b : li.options[t].blocks) c.block_energized[b] = 1;
            c.risk = absolute_risk(c.block_energized, closed, inst.bg, inst.policy.include_switch_risk);
            if (!inst.within_budget(c.risk)) continue;
            c.shed_cost = shed_cost(c.block_energized, inst.block_cost);
            out.configurations.push_back(std::move(c));
            if (out.configurations.size() == 1 ||
                configuration_less(out.configurations.back(), out.configurations[out.best], tol))
                out.best = out.configurations.size() - 1;
        }
    }
    if (out.configurations.empty()) throw SolverError("no admissible configuration");
    return out;
}

}  // namespace mgrisk
