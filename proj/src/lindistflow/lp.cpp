/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "mgrisk/lp.hpp"

#include <algorithm>
#include <cmath>

namespace mgrisk {

std::string_view to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::numerical_failure: return "numerical_failure";
    }
    return "numerical_failure";
}

std::size_t LpProblem::add_column(double lower, double upper, double c, std::string name) {
    cost.push_back(c);
    col_lower.push_back(lower);
    col_upper.push_back(upper);
    col_names.push_back(std::move(name));
    return cost.size() - 1;
}

std::size_t LpProblem::add_row(std::vector<std::pair<std::size_t, double>> coefs, double lower, double upper,
                               std::string name) {
    rows.push_back(LpRow{std::move(coefs), lower, upper, std::move(name)});
    return rows.size() - 1;
}

namespace {

// Tableau over structurals x, row slacks s (A x - s = 0) and phase-one
// artificials. Every row keeps a zero right-hand side, so basic values
// follow from the nonbasic ones: x_B = -sum_k T[i][k] x_k.
class Simplex {
 public:
    Simplex(const LpProblem& p, const LpOptions& opt) : p_(p), opt_(opt) {}

    LpSolution run();

 private:
    enum class Step { optimal, unbounded, limit };

    double& t(std::size_t i, std::size_t k) { return tab_[i * nv_ + k]; }
    double t(std::size_t i, std::size_t k) const { return tab_[i * nv_ + k]; }

    void build();
    void price_row();
    Step iterate();
    void pivot(std::size_t r, std::size_t j);
    void recompute_basics();
    bool is_artificial(std::size_t k) const { return k >= n_ + m_; }

    const LpProblem& p_;
    const LpOptions& opt_;
    std::size_t n_ = 0, m_ = 0, nv_ = 0;
    std::vector<double> tab_;
    std::vector<double> lo_, hi_, cost_, x_, d_;
    std::vector<std::size_t> head_;
    std::vector<long> pos_;  // basis row of variable, -1 when nonbasic
    std::size_t iterations_ = 0, max_iter_ = 0;
};

void Simplex::build() {
    n_ = p_.num_cols();
    m_ = p_.num_rows();
    std::vector<double> act(m_, 0.0);
    std::vector<double> x0(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        const double l = p_.col_lower[j], h = p_.col_upper[j];
        x0[j] = std::isfinite(l) ? l : (std::isfinite(h) ? h : 0.0);
    }
    for (std::size_t i = 0; i < m_; ++i)
        for (auto [j, a] : p_.rows[i].coefs) act[i] += a * x0[j];

    // Rows whose start value violates the row bounds get an artificial.
    std::vector<long> art_of(m_, -1);
    std::size_t nart = 0;
    for (std::size_t i = 0; i < m_; ++i) {
        const auto& r = p_.rows[i];
        if (act[i] < r.lower - opt_.feasibility_tol || act[i] > r.upper + opt_.feasibility_tol)
            art_of[i] = static_cast<long>(nart++);
    }
    nv_ = n_ + m_ + nart;
    tab_.assign(m_ * nv_, 0.0);
    lo_.assign(nv_, 0.0);
    hi_.assign(nv_, kInf);
    x_.assign(nv_, 0.0);
    pos_.assign(nv_, -1);
    head_.assign(m_, 0);
    for (std::size_t j = 0; j < n_; ++j) {
        lo_[j] = p_.col_lower[j];
        hi_[j] = p_.col_upper[j];
        x_[j] = x0[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
        const auto& r = p_.rows[i];
        const std::size_t s = n_ + i;
        lo_[s] = r.lower;
        hi_[s] = r.upper;
        if (art_of[i] < 0) {
            for (auto [j, a] : r.coefs) t(i, j) -= a;
            t(i, s) = 1.0;
            x_[s] = act[i];
            head_[i] = s;
        } else {
            const double target = std::clamp(act[i], r.lower, r.upper);
            const double sigma = target > act[i] ? 1.0 : -1.0;
            const std::size_t a = n_ + m_ + static_cast<std::size_t>(art_of[i]);
            for (auto [j, v] : r.coefs) t(i, j) += v / sigma;
            t(i, s) = -1.0 / sigma;
            t(i, a) = 1.0;
            x_[s] = target;
            x_[a] = (target - act[i]) / sigma;
            head_[i] = a;
        }
        pos_[head_[i]] = static_cast<long>(i);
    }
    max_iter_ = opt_.max_iterations ? opt_.max_iterations : 50 * (m_ + nv_) + 1000;
}

void Simplex::price_row() {
    d_ = cost_;
    for (std::size_t i = 0; i < m_; ++i) {
        const double cb = cost_[head_[i]];
        if (cb == 0.0) continue;
        for (std::size_t k = 0; k < nv_; ++k) d_[k] -= cb * t(i, k);
    }
    for (std::size_t i = 0; i < m_; ++i) d_[head_[i]] = 0.0;
}

void Simplex::recompute_basics() {
    for (std::size_t i = 0; i < m_; ++i) {
        double v = 0.0;
        for (std::size_t k = 0; k < nv_; ++k)
            if (pos_[k] < 0 && x_[k] != 0.0) v -= t(i, k) * x_[k];
        x_[head_[i]] = v;
    }
}

void Simplex::pivot(std::size_t r, std::size_t j) {
    const double pv = t(r, j);
    double* row = &tab_[r * nv_];
    for (std::size_t k = 0; k < nv_; ++k) row[k] /= pv;
    row[j] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
        if (i == r) continue;
        const double f = t(i, j);
        if (f == 0.0) continue;
        double* ri = &tab_[i * nv_];
        for (std::size_t k = 0; k < nv_; ++k) ri[k] -= f * row[k];
        ri[j] = 0.0;
    }
    const double fd = d_[j];
    if (fd != 0.0) {
        for (std::size_t k = 0; k < nv_; ++k) d_[k] -= fd * row[k];
        d_[j] = 0.0;
    }
    pos_[head_[r]] = -1;
    head_[r] = j;
    pos_[j] = static_cast<long>(r);
}

Simplex::Step Simplex::iterate() {
    const double ftol = opt_.feasibility_tol, dtol = opt_.optimality_tol, ptol = opt_.pivot_tol;
    std::size_t degenerate = 0;
    bool bland = false;
    while (iterations_ < max_iter_) {
        // Pricing: Dantzig, or smallest eligible index while cycling is suspected.
        std::size_t enter = nv_;
        double best = 0.0, dir = 0.0;
        for (std::size_t k = 0; k < nv_; ++k) {
            if (pos_[k] >= 0) continue;
            const double dk = d_[k];
            double dk_dir = 0.0;
            if (dk < -dtol && x_[k] < hi_[k] - ftol) dk_dir = 1.0;
            else if (dk > dtol && x_[k] > lo_[k] + ftol) dk_dir = -1.0;
            if (dk_dir == 0.0) continue;
            if (bland) {
                enter = k;
                dir = dk_dir;
                break;
            }
            if (std::abs(dk) > best) {
                best = std::abs(dk);
                enter = k;
                dir = dk_dir;
            }
        }
        if (enter == nv_) return Step::optimal;
        ++iterations_;

        // Ratio test, Harris two-pass: bound the step with relaxed limits,
        // then take the largest pivot among rows within that bound.
        double tmax = dir > 0 ? hi_[enter] - x_[enter] : x_[enter] - lo_[enter];
        double relaxed = tmax;
        for (std::size_t i = 0; i < m_; ++i) {
            const double alpha = t(i, enter) * dir;
            const std::size_t b = head_[i];
            if (alpha > ptol && std::isfinite(lo_[b]))
                relaxed = std::min(relaxed, (x_[b] - lo_[b] + ftol) / alpha);
            else if (alpha < -ptol && std::isfinite(hi_[b]))
                relaxed = std::min(relaxed, (hi_[b] - x_[b] + ftol) / -alpha);
        }
        if (!std::isfinite(relaxed)) return Step::unbounded;

        long leave = -1;
        double step = tmax, best_alpha = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const double alpha = t(i, enter) * dir;
            const std::size_t b = head_[i];
            double lim;
            if (alpha > ptol && std::isfinite(lo_[b])) lim = (x_[b] - lo_[b]) / alpha;
            else if (alpha < -ptol && std::isfinite(hi_[b])) lim = (hi_[b] - x_[b]) / -alpha;
            else continue;
            if (lim > relaxed) continue;
            const bool better = bland ? (leave < 0 || b < head_[static_cast<std::size_t>(leave)])
                                      : std::abs(alpha) > best_alpha;
            if (better) {
                leave = static_cast<long>(i);
                best_alpha = std::abs(alpha);
                step = std::max(lim, 0.0);
            }
        }
        if (leave >= 0 && step > tmax) leave = -1, step = tmax;
        if (leave < 0 && !std::isfinite(tmax)) return Step::unbounded;

        if (step <= ftol) {
            if (++degenerate > 30) bland = true;
        } else {
            degenerate = 0;
            bland = false;
        }

        x_[enter] += dir * step;
        for (std::size_t i = 0; i < m_; ++i) {
            const double a = t(i, enter);
            if (a != 0.0) x_[head_[i]] -= a * dir * step;
        }
        if (leave < 0) {
            // Bound flip.
            x_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
        } else {
            const std::size_t r = static_cast<std::size_t>(leave);
            const std::size_t out = head_[r];
            const double alpha = t(r, enter) * dir;
            x_[out] = alpha > 0 ? lo_[out] : hi_[out];
            pivot(r, enter);
        }
        if (iterations_ % 64 == 0) recompute_basics();
    }
    return Step::limit;
}

LpSolution Simplex::run() {
    LpSolution sol;
    n_ = p_.num_cols();
    for (std::size_t j = 0; j < n_; ++j)
        if (p_.col_lower[j] > p_.col_upper[j]) {
            sol.status = LpStatus::infeasible;
            return sol;
        }
    for (const auto& r : p_.rows)
        if (r.lower > r.upper) {
            sol.status = LpStatus::infeasible;
            return sol;
        }

    build();

    double scale = 1.0;
    for (std::size_t j = 0; j < n_; ++j) {
        if (std::isfinite(lo_[j])) scale = std::max(scale, std::abs(lo_[j]));
        if (std::isfinite(hi_[j])) scale = std::max(scale, std::abs(hi_[j]));
    }
    for (const auto& r : p_.rows) {
        if (std::isfinite(r.lower)) scale = std::max(scale, std::abs(r.lower));
        if (std::isfinite(r.upper)) scale = std::max(scale, std::abs(r.upper));
    }

    if (nv_ > n_ + m_) {
        cost_.assign(nv_, 0.0);
        for (std::size_t k = n_ + m_; k < nv_; ++k) cost_[k] = 1.0;
        price_row();
        if (iterate() == Step::limit) {
            sol.status = LpStatus::numerical_failure;
            sol.iterations = iterations_;
            return sol;
        }
        recompute_basics();
        double infeas = 0.0;
        for (std::size_t k = n_ + m_; k < nv_; ++k) infeas += x_[k];
        if (infeas > 10 * opt_.feasibility_tol * scale) {
            sol.status = LpStatus::infeasible;
            sol.iterations = iterations_;
            return sol;
        }
        // Pin artificials at zero and pivot basic ones out where possible.
        for (std::size_t k = n_ + m_; k < nv_; ++k) {
            hi_[k] = 0.0;
            if (pos_[k] < 0) x_[k] = 0.0;
        }
        for (std::size_t r = 0; r < m_; ++r) {
            if (!is_artificial(head_[r])) continue;
            std::size_t best = nv_;
            double mag = 1e-7;
            for (std::size_t k = 0; k < n_ + m_; ++k)
                if (pos_[k] < 0 && std::abs(t(r, k)) > mag) {
                    mag = std::abs(t(r, k));
                    best = k;
                }
            if (best == nv_) continue;
            d_.assign(nv_, 0.0);
            const std::size_t a = head_[r];
            pivot(r, best);
            x_[a] = 0.0;
        }
        recompute_basics();
    }

    cost_.assign(nv_, 0.0);
    const double sgn = p_.sense == LpSense::maximize ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = sgn * p_.cost[j];
    price_row();
    const Step st = iterate();
    sol.iterations = iterations_;
    if (st == Step::limit) {
        sol.status = LpStatus::numerical_failure;
        return sol;
    }
    if (st == Step::unbounded) {
        sol.status = LpStatus::unbounded;
        return sol;
    }
    recompute_basics();

    sol.x.assign(x_.begin(), x_.begin() + static_cast<long>(n_));
    // Snap structurals that drifted past a bound by rounding noise.
    for (std::size_t j = 0; j < n_; ++j) sol.x[j] = std::clamp(sol.x[j], lo_[j], hi_[j]);
    sol.row_activity.assign(m_, 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
        const auto& r = p_.rows[i];
        double act = 0.0, mag = 1.0;
        for (auto [j, a] : r.coefs) {
            act += a * sol.x[j];
            mag = std::max(mag, std::abs(a * sol.x[j]));
        }
        sol.row_activity[i] = act;
        const double v = std::max(r.lower - act, act - r.upper);
        worst = std::max(worst, v / std::max(mag, std::isfinite(r.lower) ? std::abs(r.lower) : 0.0));
    }
    sol.max_violation = std::max(worst, 0.0);
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sol.objective += p_.cost[j] * sol.x[j];
    sol.status = sol.max_violation > opt_.residual_tol ? LpStatus::numerical_failure : LpStatus::optimal;
    return sol;
}

}  // namespace

LpSolution solve_lp(const LpProblem& p, const LpOptions& opt) { return Simplex(p, opt).run(); }

}  // namespace mgrisk
