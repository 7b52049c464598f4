#include "signals.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "errors.hpp"

namespace ilab {

int SignalFunctional::anchor_step(const LatticeEconomy& economy) const {
    const double t = anchor_t < 0.0 ? economy.horizon() : anchor_t;
    if (!(t > 0.0) || t > 1.0) throw invalid_spec("signal: anchor time must lie in (0, 1]");
    return static_cast<int>(std::floor(static_cast<double>(economy.steps()) * t + 1e-12));
}

const char* to_string(SignalKind kind) {
    switch (kind) {
        case SignalKind::terminal_value: return "terminal_value";
        case SignalKind::running_max: return "running_max";
        case SignalKind::future_ratio: return "future_ratio";
    }
    return "?";
}

SignalKind signal_kind_from_string(const std::string& name) {
    if (name == "terminal_value") return SignalKind::terminal_value;
    if (name == "running_max") return SignalKind::running_max;
    if (name == "future_ratio") return SignalKind::future_ratio;
    throw invalid_spec("signal: unknown kind '" + name + "'");
}

double signal_value_on_path(const SignalFunctional& signal, const LatticeEconomy& economy,
                            std::span<const double> path_states) {
    if (path_states.size() != static_cast<std::size_t>(economy.steps()) + 1)
        throw invalid_spec("signal: path must cover all lattice dates");
    switch (signal.kind) {
        case SignalKind::terminal_value:
            return path_states.back();
        case SignalKind::running_max:
            return *std::max_element(path_states.begin(), path_states.end());
        case SignalKind::future_ratio: {
            const int a = signal.anchor_step(economy);
            return path_states.back() - path_states[static_cast<std::size_t>(a)];
        }
    }
    throw invalid_spec("signal: unknown kind");
}

namespace {

bool nearly_equal(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= 1e-9 * scale;
}

} // namespace

bool DensityTable::has_row(int m) const {
    return std::binary_search(times_.begin(), times_.end(), m);
}

const DensityTable::Row& DensityTable::row(int m) const {
    auto it = std::lower_bound(times_.begin(), times_.end(), m);
    if (it == times_.end() || *it != m) throw invalid_spec("density table: time not materialized");
    return rows_[static_cast<std::size_t>(it - times_.begin())];
}

const std::vector<StateCell>& DensityTable::states(int m) const { return row(m).states; }

double DensityTable::eta(int m, int state_index, int y_index) const {
    const Row& r = row(m);
    return r.eta[static_cast<std::size_t>(state_index) * y_values_.size() +
                 static_cast<std::size_t>(y_index)];
}

std::span<const double> DensityTable::eta_row(int m, int state_index) const {
    const Row& r = row(m);
    return {r.eta.data() + static_cast<std::size_t>(state_index) * y_values_.size(),
            y_values_.size()};
}

int DensityTable::signal_index(double y) const {
    auto it = std::lower_bound(y_values_.begin(), y_values_.end(),
                               y - 1e-9 * std::max(1.0, std::abs(y)));
    if (it != y_values_.end() && nearly_equal(*it, y))
        return static_cast<int>(it - y_values_.begin());
    return -1;
}

DensityTable DensityTable::build(const LatticeEconomy& economy, const SignalFunctional& signal,
                                 int m_upto) {
    if (m_upto < 0) m_upto = economy.trading_steps();
    std::vector<int> times(static_cast<std::size_t>(m_upto) + 1);
    for (int m = 0; m <= m_upto; ++m) times[static_cast<std::size_t>(m)] = m;
    return build_times(economy, signal, std::move(times));
}

DensityTable DensityTable::build_at(const LatticeEconomy& economy, const SignalFunctional& signal,
                                    int m) {
    return build_times(economy, signal, {m});
}

DensityTable DensityTable::build_times(const LatticeEconomy& economy,
                                       const SignalFunctional& signal, std::vector<int> times) {
    DensityTable t;
    t.signal_ = signal;
    t.n_ = economy.steps();
    t.scale_ = economy.scale();
    t.times_ = std::move(times);
    std::sort(t.times_.begin(), t.times_.end());
    if (t.times_.empty() || t.times_.front() < 0 || t.times_.back() > economy.steps())
        throw invalid_spec("density table: time range invalid");
    if (signal.kind == SignalKind::future_ratio &&
        t.times_.back() > signal.anchor_step(economy))
        throw invalid_spec("density table: future_ratio rows must not pass the anchor");

    if (economy.recombining()) {
        switch (signal.kind) {
            case SignalKind::terminal_value: t.build_terminal_fast(economy); break;
            case SignalKind::running_max: t.build_running_max_fast(economy); break;
            case SignalKind::future_ratio: t.build_future_ratio_fast(economy); break;
        }
    } else {
        t.build_by_enumeration(economy);
    }
    t.collect_zero_cells(economy);
    return t;
}

void DensityTable::build_terminal_fast(const LatticeEconomy& economy) {
    const int n = n_;
    const std::vector<double> pmf_n = srw_pmf(n);
    for (int y = -n; y <= n; y += 2) {
        const double p = srw_prob(pmf_n, n, y);
        if (p > 0.0) {
            y_values_.push_back(y);
            y_probs_.push_back(p);
        }
    }
    for (int m : times_) {
        Row r;
        r.m = m;
        const std::vector<double> pmf_m = srw_pmf(m);
        const std::vector<double> pmf_rest = srw_pmf(n - m);
        for (int x = -m; x <= m; x += 2) {
            const double px = srw_prob(pmf_m, m, x);
            if (px > 0.0) r.states.push_back({static_cast<double>(x), 0.0, false, px});
        }
        r.eta.resize(r.states.size() * y_values_.size(), 0.0);
        for (std::size_t i = 0; i < r.states.size(); ++i) {
            const int x = static_cast<int>(r.states[i].value);
            for (std::size_t j = 0; j < y_values_.size(); ++j) {
                const int y = static_cast<int>(y_values_[j]);
                const double num = srw_prob(pmf_rest, n - m, y - x);
                r.eta[i * y_values_.size() + j] = num / y_probs_[j];
            }
        }
        rows_.push_back(std::move(r));
    }
}

void DensityTable::build_running_max_fast(const LatticeEconomy& economy) {
    const int n = n_;
    const std::vector<double> max_n = srw_max_pmf(n);
    for (int h = 0; h <= n; ++h) {
        if (max_n[static_cast<std::size_t>(h)] > 0.0) {
            y_values_.push_back(h);
            y_probs_.push_back(max_n[static_cast<std::size_t>(h)]);
        }
    }
    // Joint walk for (position, running max); recursion over time.
    std::map<std::pair<int, int>, double> cells{{{0, 0}, 1.0}};
    std::size_t next_time_index = 0;
    for (int m = 0; m <= times_.back(); ++m) {
        if (next_time_index < times_.size() && times_[next_time_index] == m) {
            Row r;
            r.m = m;
            const int k = n - m;
            const std::vector<double> max_rest = srw_max_pmf(k);
            std::vector<double> max_rest_cdf(max_rest.size());
            double acc = 0.0;
            for (std::size_t h = 0; h < max_rest.size(); ++h) {
                acc += max_rest[h];
                max_rest_cdf[h] = acc;
            }
            for (const auto& [key, prob] : cells)
                r.states.push_back({static_cast<double>(key.first),
                                    static_cast<double>(key.second), true, prob});
            r.eta.resize(r.states.size() * y_values_.size(), 0.0);
            for (std::size_t i = 0; i < r.states.size(); ++i) {
                const int x = static_cast<int>(r.states[i].value);
                const int cur_max = static_cast<int>(r.states[i].run_max);
                for (std::size_t j = 0; j < y_values_.size(); ++j) {
                    const int y = static_cast<int>(y_values_[j]);
                    double cond = 0.0;
                    if (y == cur_max) {
                        // future excursion must stay at or below the standing max
                        const int h = cur_max - x;
                        if (h >= 0)
                            cond = h >= k ? 1.0 : max_rest_cdf[static_cast<std::size_t>(h)];
                    } else if (y > cur_max) {
                        const int h = y - x;
                        if (h >= 0 && h <= k) cond = max_rest[static_cast<std::size_t>(h)];
                    }
                    r.eta[i * y_values_.size() + j] = cond / y_probs_[j];
                }
            }
            rows_.push_back(std::move(r));
            ++next_time_index;
        }
        if (m == times_.back()) break;
        std::map<std::pair<int, int>, double> next;
        for (const auto& [key, prob] : cells) {
            const auto [x, mx] = key;
            next[{x + 1, std::max(mx, x + 1)}] += 0.5 * prob;
            next[{x - 1, mx}] += 0.5 * prob;
        }
        cells = std::move(next);
        if (cells.size() > economy.caps().state_cap)
            throw numerical_error("density table: running-max state count exceeds cap");
    }
}

void DensityTable::build_future_ratio_fast(const LatticeEconomy& economy) {
    const int n = n_;
    const int anchor = signal_.anchor_step(economy);
    const int rest = n - anchor;
    const std::vector<double> pmf_rest = srw_pmf(rest);
    for (int y = -rest; y <= rest; y += 2) {
        const double p = srw_prob(pmf_rest, rest, y);
        if (p > 0.0) {
            y_values_.push_back(y);
            y_probs_.push_back(p);
        }
    }
    for (int m : times_) {
        Row r;
        r.m = m;
        const std::vector<double> pmf_m = srw_pmf(m);
        for (int x = -m; x <= m; x += 2) {
            const double px = srw_prob(pmf_m, m, x);
            if (px > 0.0) r.states.push_back({static_cast<double>(x), 0.0, false, px});
        }
        // The signal depends only on increments past the anchor, so every
        // conditional law equals the unconditional one.
        r.eta.assign(r.states.size() * y_values_.size(), 1.0);
        rows_.push_back(std::move(r));
    }
}

void DensityTable::build_by_enumeration(const LatticeEconomy& economy) {
    const int n = n_;
    const bool track_max = signal_.kind == SignalKind::running_max;
    // First pass: signal law.
    std::map<long long, std::pair<double, double>> y_acc; // key -> (value, prob)
    const auto key_of = [](double v) { return static_cast<long long>(std::llround(v * 1e6)); };
    enumerate_paths(economy, n, [&](std::span<const double> states, double prob) {
        const double y = signal_value_on_path(signal_, economy, states);
        auto& slot = y_acc[key_of(y)];
        slot.first = y;
        slot.second += prob;
    });
    for (const auto& [k, vp] : y_acc) {
        y_values_.push_back(vp.first);
        y_probs_.push_back(vp.second);
    }
    for (int m : times_) {
        std::map<std::pair<long long, long long>, std::pair<StateCell, std::vector<double>>> acc;
        enumerate_paths(economy, n, [&](std::span<const double> states, double prob) {
            const double x = states[static_cast<std::size_t>(m)];
            double run_max = 0.0;
            if (track_max)
                run_max = *std::max_element(states.begin(),
                                            states.begin() + m + 1);
            const double y = signal_value_on_path(signal_, economy, states);
            const int yi = signal_index(y);
            auto& slot = acc[{key_of(x), track_max ? key_of(run_max) : 0}];
            if (slot.second.empty()) {
                slot.first = {x, run_max, track_max, 0.0};
                slot.second.assign(y_values_.size(), 0.0);
            }
            slot.first.prob += prob;
            slot.second[static_cast<std::size_t>(yi)] += prob;
        });
        Row r;
        r.m = m;
        for (auto& [k, cell] : acc) {
            r.states.push_back(cell.first);
            for (std::size_t j = 0; j < y_values_.size(); ++j) {
                const double joint = cell.second[j];
                r.eta.push_back(joint / (cell.first.prob * y_probs_[j]));
            }
        }
        rows_.push_back(std::move(r));
    }
}

void DensityTable::collect_zero_cells(const LatticeEconomy& economy) {
    zero_product_mass_ = 0.0;
    for (std::size_t ri = 0; ri < rows_.size(); ++ri) {
        const Row& r = rows_[ri];
        for (std::size_t i = 0; i < r.states.size(); ++i) {
            for (std::size_t j = 0; j < y_values_.size(); ++j) {
                const double e = r.eta[i * y_values_.size() + j];
                if (e == 0.0) {
                    const double product = r.states[i].prob * y_probs_[j];
                    if (product > 0.0) {
                        zero_cells_.push_back(
                            {r.m, static_cast<int>(i), static_cast<int>(j), product});
                        zero_product_mass_ += product;
                    }
                }
            }
        }
    }
    (void)economy;
}

EquivalenceReport check_equivalence(const DensityTable& table) {
    EquivalenceReport rep;
    rep.violations = table.zero_cells();
    rep.excluded_product_mass = table.zero_product_mass();
    return rep;
}

double zero_cell_joint_mass(const LatticeEconomy& economy, const DensityTable& table) {
    if (table.zero_cells().empty()) return 0.0;
    const bool track_max = table.signal().kind == SignalKind::running_max;
    double mass = 0.0;
    enumerate_paths(economy, economy.steps(), [&](std::span<const double> states, double prob) {
        const double y = signal_value_on_path(table.signal(), economy, states);
        const int yi = table.signal_index(y);
        for (const ZeroMassCell& cell : table.zero_cells()) {
            if (cell.y_index != yi) continue;
            const StateCell& sc = table.states(cell.m)[static_cast<std::size_t>(cell.state_index)];
            const double x = states[static_cast<std::size_t>(cell.m)];
            if (std::abs(x - sc.value) > 1e-9) continue;
            if (track_max) {
                const double run_max =
                    *std::max_element(states.begin(), states.begin() + cell.m + 1);
                if (std::abs(run_max - sc.run_max) > 1e-9) continue;
            }
            mass += prob;
        }
    });
    return mass;
}

RunningMaxComparison running_max_density_formula(const LatticeEconomy& economy, int m, int y,
                                                 int x) {
    if (!economy.recombining())
        throw invalid_spec("running-max formula: requires the symmetric two-point walk");
    const int n = economy.steps();
    if (m < 0 || m > n) throw invalid_spec("running-max formula: time out of range");
    RunningMaxComparison out;
    // Displayed reflection count: sum over lattice states x' <= y at time m of
    // C(n-m, floor((n-m + y - x' + 1)/2)) 2^{-(n-m)}.
    const int k = n - m;
    const std::vector<double> pmf_k = srw_pmf(k);
    double total = 0.0;
    for (int xp = -m; xp <= std::min(y, m); xp += 2) {
        const int idx = (k + (y - xp) + 1) / 2; // floor for nonnegative argument
        if (idx >= 0 && idx <= k) total += pmf_k[static_cast<std::size_t>(idx)];
    }
    out.formula_value = total;

    // Enumerated P[Y = y | S_m = x], averaging the table cells that share the
    // walk position x.
    const SignalFunctional sig{SignalKind::running_max, -1.0};
    const DensityTable table = DensityTable::build_at(economy, sig, m);
    const int yi = table.signal_index(static_cast<double>(y));
    double px = 0.0, pxy = 0.0;
    const auto& cells = table.states(m);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (static_cast<int>(cells[i].value) != x) continue;
        px += cells[i].prob;
        if (yi >= 0)
            pxy += cells[i].prob * table.eta(m, static_cast<int>(i), yi) *
                   table.signal_probs()[static_cast<std::size_t>(yi)];
    }
    if (px <= 0.0) throw invalid_spec("running-max formula: state not reachable");
    out.conditional_probability = pxy / px;
    return out;
}

double gaussian_eta(double t, double x, double y) {
    if (!(t > 0.0) || t >= 1.0)
        throw invalid_spec("gaussian_eta: t must lie in (0, 1)");
    const double rem = 1.0 - t;
    return std::exp(-(y - x) * (y - x) / (2.0 * rem) + y * y / 2.0) / std::sqrt(rem);
}

double mean_log_eta(const DensityTable& table, int m) {
    const auto& cells = table.states(m);
    const auto& py = table.signal_probs();
    double acc = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto etas = table.eta_row(m, static_cast<int>(i));
        for (std::size_t j = 0; j < py.size(); ++j) {
            const double e = etas[j];
            if (e > 0.0) acc += cells[i].prob * e * py[j] * std::log(e);
        }
    }
    return acc;
}

} // namespace ilab
