#include "evplace/branch_and_cut.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>

#include "evplace/errors.hpp"
#include "text_util.hpp"

namespace evplace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double mip_gap(double best_bound, double incumbent) {
    if (!std::isfinite(incumbent)) return kInf;
    if (best_bound == incumbent) return 0.0;
    if (incumbent == 0.0) return kInf;
    return std::abs(best_bound - incumbent) / std::abs(incumbent);
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::gap_reached: return "gap_reached";
        case SolveStatus::time_limit: return "time_limit";
        case SolveStatus::node_limit: return "node_limit";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::no_incumbent: return "no_incumbent";
    }
    return "unknown";
}

std::string format_progress(const ProgressEvent& ev) {
    auto num = [](double v) {
        if (v == kInf) return std::string("inf");
        if (v == -kInf) return std::string("-inf");
        return detail::fmt_double(v);
    };
    char time_buf[32];
    std::snprintf(time_buf, sizeof(time_buf), "%.3f", ev.time_s);
    std::string out = "nodes=" + std::to_string(ev.nodes);
    out += " bound=" + num(ev.best_bound);
    out += " incumbent=" + num(ev.incumbent);
    out += " gap=" + num(ev.gap);
    out += " cuts=" + std::to_string(ev.cuts);
    out += " time=";
    out += time_buf;
    return out;
}

std::pair<Node, Node> branch(const Node& node, const MilpModel& model,
                             const std::vector<double>& lp_values, double node_bound,
                             long long next_id, double int_tol) {
    if (lp_values.size() != model.variables.size()) {
        throw std::invalid_argument("branch: value vector size mismatch");
    }
    std::ptrdiff_t var = -1;
    double best_score = int_tol;
    for (std::size_t j = 0; j < model.num_integer(); ++j) {
        const double v = lp_values[j];
        const double score = std::min(v - std::floor(v), std::ceil(v) - v);
        if (score > best_score) {
            var = static_cast<std::ptrdiff_t>(j);
            best_score = score;
        }
    }
    if (var < 0) {
        throw std::logic_error("branch: no fractional integer variable");
    }
    const std::size_t j = static_cast<std::size_t>(var);
    double eff_lb = model.variables[j].lb;
    double eff_ub = model.variables[j].ub;
    for (const auto& [idx, bounds] : node.bound_overrides) {
        if (idx == j) {
            eff_lb = bounds.first;
            eff_ub = bounds.second;
        }
    }
    const double v = lp_values[j];

    Node down = node;
    down.id = next_id;
    down.depth = node.depth + 1;
    down.parent_bound = node_bound;
    down.bound_overrides.emplace_back(j, std::make_pair(eff_lb, std::floor(v)));

    Node up = node;
    up.id = next_id + 1;
    up.depth = node.depth + 1;
    up.parent_bound = node_bound;
    up.bound_overrides.emplace_back(j, std::make_pair(std::ceil(v), eff_ub));
    return {std::move(down), std::move(up)};
}

namespace {

void apply_bounds(const MilpModel& model, const Node& node, std::vector<double>& lb,
                  std::vector<double>& ub) {
    lb.clear();
    ub.clear();
    lb.reserve(model.variables.size());
    ub.reserve(model.variables.size());
    for (const auto& v : model.variables) {
        lb.push_back(v.lb);
        ub.push_back(v.ub);
    }
    for (const auto& [idx, bounds] : node.bound_overrides) {
        lb[idx] = bounds.first;
        ub[idx] = bounds.second;
    }
}

std::string cut_key(const Cut& cut) {
    std::string key;
    char buf[40];
    for (const auto& [idx, coef] : cut.coefs) {
        std::snprintf(buf, sizeof(buf), "%zu:%.9e;", idx, coef);
        key += buf;
    }
    std::snprintf(buf, sizeof(buf), "r%.9e", cut.rhs);
    key += buf;
    return key;
}

bool is_integral(const MilpModel& model, const std::vector<double>& values, double int_tol) {
    for (std::size_t j = 0; j < model.num_integer(); ++j) {
        if (std::abs(values[j] - std::round(values[j])) > int_tol) return false;
    }
    return true;
}

}  // namespace

BncResult branch_and_cut(const MilpModel& model, const SolverOptions& opts,
                         const SolveHooks* hooks) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };

    BncResult result;
    SolverStats& stats = result.stats;

    // Active nodes ordered by (bound, -depth, id): best bound first, then
    // deepest, then oldest. std::map keeps selection deterministic.
    using Key = std::tuple<double, int, long long>;
    std::map<Key, Node> active;
    Node root;
    active.emplace(Key{-kInf, 0, 0}, std::move(root));
    long long next_id = 1;

    std::vector<Cut> pool;
    std::map<std::string, std::size_t> pool_index;

    std::vector<double> inc_values;
    double inc_obj = kInf;
    double best_bound = -kInf;

    auto emit_progress = [&](double gap) {
        if (hooks && hooks->on_progress) {
            hooks->on_progress({stats.nodes_explored, best_bound, inc_obj, gap,
                                stats.cuts_added, elapsed()});
        }
    };

    SolveStatus status = SolveStatus::no_incumbent;
    while (true) {
        // Fathom queued nodes that can no longer beat the incumbent.
        if (inc_obj < kInf) {
            const double prune_tol = 1e-9 * std::max(1.0, std::abs(inc_obj));
            for (auto it = active.begin(); it != active.end();) {
                if (std::get<0>(it->first) >= inc_obj - prune_tol) {
                    it = active.erase(it);
                } else {
                    ++it;
                }
            }
        }
        if (active.empty()) {
            status = inc_obj < kInf ? SolveStatus::optimal : SolveStatus::infeasible;
            best_bound = inc_obj < kInf ? inc_obj : kInf;
            break;
        }
        best_bound = std::max(best_bound, std::get<0>(active.begin()->first));
        const double gap = mip_gap(best_bound, inc_obj);
        if (inc_obj < kInf && gap <= opts.gap) {
            status = gap == 0.0 ? SolveStatus::optimal : SolveStatus::gap_reached;
            break;
        }
        if (elapsed() >= opts.time_limit_s) {
            status = SolveStatus::time_limit;
            break;
        }
        if (opts.node_limit > 0 && stats.nodes_explored >= opts.node_limit) {
            status = SolveStatus::node_limit;
            break;
        }

        Node node = std::move(active.begin()->second);
        active.erase(active.begin());
        ++stats.nodes_explored;

        std::vector<double> lb, ub;
        apply_bounds(model, node, lb, ub);
        // Only the most recent cuts on the node's path enter its LP. Long
        // paths stack nearly-parallel rows that ruin the basis conditioning,
        // and dropping a cut merely loosens a still-valid relaxation.
        constexpr std::size_t kMaxCutRows = 20;
        const std::size_t n_active = std::min(node.cut_ids.size(), kMaxCutRows);
        std::vector<std::size_t> active_ids(node.cut_ids.end() - n_active,
                                            node.cut_ids.end());
        std::vector<CutRow> node_cuts;
        node_cuts.reserve(n_active + 1);
        for (std::size_t id : active_ids) {
            node_cuts.push_back({pool[id].coefs, pool[id].rhs});
        }

        bool fathomed = false;
        double node_bound = node.parent_bound;
        double prev_bound = -kInf;
        std::vector<double> lp_values;
        for (int round = 0;; ++round) {
            SimplexTableau tableau = [&] {
                SimplexTableau t(model, lb, ub, node_cuts, opts.lp);
                try {
                    t.solve();
                    return t;
                } catch (const NumericError&) {
                    if (opts.lp.bland_after_degenerate <= 0) throw;
                    // Bland's rule from the first pivot: slower, but immune
                    // to pricing choices that break down numerically.
                    LpOptions safe = opts.lp;
                    safe.bland_after_degenerate = 0;
                    SimplexTableau t2(model, lb, ub, node_cuts, safe);
                    try {
                        t2.solve();
                    } catch (const NumericError& e) {
                        throw NumericError(std::string(e.what()) + " at node " +
                                           std::to_string(node.id));
                    }
                    return t2;
                }
            }();
            const LpStatus st = tableau.status();
            if (st == LpStatus::infeasible) {
                fathomed = true;
                break;
            }
            if (st == LpStatus::unbounded) {
                throw NumericError("relaxation unbounded over a finite box at node " +
                                   std::to_string(node.id));
            }
            node_bound = std::max(node_bound, tableau.objective());
            if (node_bound >= inc_obj - 1e-9 * std::max(1.0, std::abs(inc_obj))) {
                fathomed = true;
                break;
            }
            lp_values = tableau.structural_values();
            if (is_integral(model, lp_values, opts.int_tol)) {
                for (std::size_t j = 0; j < model.num_integer(); ++j) {
                    lp_values[j] = std::round(lp_values[j]);
                }
                const double obj = model.objective_value(lp_values);
                if (obj < inc_obj) {
                    inc_obj = obj;
                    inc_values = lp_values;
                    stats.incumbent_history.emplace_back(elapsed(), obj);
                    emit_progress(mip_gap(best_bound, inc_obj));
                }
                fathomed = true;
                break;
            }
            if (round >= opts.max_cuts_per_node) break;
            // Rounds that no longer move the node bound are wasted LP solves.
            if (round > 0 &&
                node_bound <= prev_bound + 1e-9 * std::max(1.0, std::abs(node_bound))) {
                break;
            }
            prev_bound = node_bound;

            // One cut per round: the most violated over all candidate rows.
            std::optional<Cut> best;
            for (std::size_t r = 0; r < tableau.num_rows(); ++r) {
                auto cut = gomory_cut(tableau, r);
                if (cut && (!best || cut->violation > best->violation)) {
                    best = std::move(cut);
                }
            }
            if (!best) break;
            best->origin_node = node.id;

            const std::string key = cut_key(*best);
            auto [it, inserted] = pool_index.try_emplace(key, pool.size());
            if (inserted) {
                pool.push_back(*best);
                ++stats.cuts_added;
            } else if (std::count(active_ids.begin(), active_ids.end(), it->second)) {
                break;  // regenerated a cut already in this LP; no progress
            }
            if (hooks && hooks->on_cut) {
                hooks->on_cut({*best, node.id, lb, ub, node_cuts});
            }
            node.cut_ids.push_back(it->second);
            active_ids.push_back(it->second);
            node_cuts.push_back({best->coefs, best->rhs});
        }

        if (!fathomed) {
            auto [down, up] = branch(node, model, lp_values, node_bound, next_id, opts.int_tol);
            next_id += 2;
            active.emplace(Key{down.parent_bound, -down.depth, down.id}, std::move(down));
            active.emplace(Key{up.parent_bound, -up.depth, up.id}, std::move(up));
        }

        if (opts.progress_every > 0 && stats.nodes_explored % opts.progress_every == 0) {
            double b = best_bound;
            if (!active.empty()) b = std::max(b, std::get<0>(active.begin()->first));
            emit_progress(mip_gap(b, inc_obj));
        }
    }

    stats.status = status;
    stats.best_bound = best_bound;
    stats.final_gap = mip_gap(best_bound, inc_obj);
    stats.wall_time_s = elapsed();
    emit_progress(stats.final_gap);

    if (inc_obj < kInf) {
        Decision d = values_to_decision(model, inc_values);
        // Open flags are free in the objective; pin them to the station
        // counts so equal-cost solutions export identically.
        for (std::size_t i = 0; i < model.n_sites; ++i) {
            d.open[i] = (d.x2[i] + d.x3[i]) > 0 ? 1 : 0;
        }
        result.incumbent = std::move(d);
        result.objective = inc_obj;
    }
    return result;
}

SolveOutcome solve(const Instance& inst, const MilpModel& model, const SolverOptions& opts,
                   const SolveHooks* hooks) {
    BncResult bnc = branch_and_cut(model, opts, hooks);
    SolveOutcome outcome;
    outcome.stats = std::move(bnc.stats);
    if (bnc.incumbent) {
        Solution sol;
        sol.decision = std::move(*bnc.incumbent);
        sol.objective = bnc.objective;
        sol.breakdown = evaluate(sol.decision, inst);
        outcome.solution = std::move(sol);
    }
    return outcome;
}

}  // namespace evplace
