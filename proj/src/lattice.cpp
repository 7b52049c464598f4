#include "lattice.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace ilab {

std::vector<double> srw_pmf(int k) {
    std::vector<double> p{1.0};
    p.reserve(static_cast<std::size_t>(k) + 1);
    for (int step = 1; step <= k; ++step) {
        std::vector<double> next(static_cast<std::size_t>(step) + 1, 0.0);
        for (int j = 0; j < step; ++j) {
            next[static_cast<std::size_t>(j)] += 0.5 * p[static_cast<std::size_t>(j)];
            next[static_cast<std::size_t>(j) + 1] += 0.5 * p[static_cast<std::size_t>(j)];
        }
        p = std::move(next);
    }
    return p;
}

double srw_prob(std::span<const double> pmf, int k, int value) {
    if (value < -k || value > k || ((k + value) & 1) != 0) return 0.0;
    return pmf[static_cast<std::size_t>((k + value) / 2)];
}

std::vector<double> srw_max_pmf(int k) {
    const std::vector<double> pmf = srw_pmf(k);
    std::vector<double> out(static_cast<std::size_t>(k) + 1, 0.0);
    for (int h = 0; h <= k; ++h)
        out[static_cast<std::size_t>(h)] =
            srw_prob(pmf, k, h) + srw_prob(pmf, k, h + 1);
    return out;
}

namespace {

// Merge tolerance for partial-sum collisions on general supports.
bool nearly_equal(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= 1e-9 * scale;
}

} // namespace

LatticeEconomy LatticeEconomy::build(const StepDistribution& dist, int n, double t,
                                     const LatticeCaps& caps) {
    if (n < 1) throw invalid_spec("lattice: n must be >= 1");
    if (!(t > 0.0) || t > 1.0) throw invalid_spec("lattice: horizon t must lie in (0, 1]");
    LatticeEconomy e;
    e.dist_ = dist;
    e.n_ = n;
    e.t_ = t;
    e.m_of_t_ = static_cast<int>(std::floor(static_cast<double>(n) * t + 1e-12));
    e.scale_ = 1.0 / std::sqrt(static_cast<double>(n));
    e.recombining_ = dist.is_rademacher();
    e.caps_ = caps;
    if (!e.recombining_) {
        e.layer_values_.resize(static_cast<std::size_t>(n) + 1);
        e.layer_probs_.resize(static_cast<std::size_t>(n) + 1);
        e.layer_values_[0] = {0.0};
        e.layer_probs_[0] = {1.0};
        std::uint64_t total_states = 1;
        for (int m = 0; m < n; ++m) {
            const auto& vals = e.layer_values_[static_cast<std::size_t>(m)];
            const auto& probs = e.layer_probs_[static_cast<std::size_t>(m)];
            std::vector<std::pair<double, double>> expanded;
            expanded.reserve(vals.size() * dist.atoms().size());
            for (std::size_t i = 0; i < vals.size(); ++i)
                for (const Atom& at : dist.atoms())
                    expanded.emplace_back(vals[i] + at.value, probs[i] * at.prob);
            std::sort(expanded.begin(), expanded.end());
            auto& nv = e.layer_values_[static_cast<std::size_t>(m) + 1];
            auto& np = e.layer_probs_[static_cast<std::size_t>(m) + 1];
            for (const auto& [v, p] : expanded) {
                if (!nv.empty() && nearly_equal(nv.back(), v)) {
                    np.back() += p;
                } else {
                    nv.push_back(v);
                    np.push_back(p);
                }
            }
            total_states += nv.size();
            if (total_states > caps.state_cap)
                throw numerical_error("lattice: non-recombining state count exceeds cap");
        }
    }
    return e;
}

std::vector<double> LatticeEconomy::state_values(int m) const {
    if (m < 0 || m > n_) throw invalid_spec("lattice: time index out of range");
    if (recombining_) {
        std::vector<double> vals(static_cast<std::size_t>(m) + 1);
        for (int j = 0; j <= m; ++j) vals[static_cast<std::size_t>(j)] = 2.0 * j - m;
        return vals;
    }
    return layer_values_[static_cast<std::size_t>(m)];
}

std::vector<double> LatticeEconomy::state_probs(int m) const {
    if (m < 0 || m > n_) throw invalid_spec("lattice: time index out of range");
    if (recombining_) return srw_pmf(m);
    return layer_probs_[static_cast<std::size_t>(m)];
}

int LatticeEconomy::state_index(int m, double value) const {
    if (recombining_) {
        const int v = static_cast<int>(std::lround(value));
        if (v < -m || v > m || ((m + v) & 1) != 0) return -1;
        return (m + v) / 2;
    }
    const auto& vals = layer_values_[static_cast<std::size_t>(m)];
    auto it = std::lower_bound(vals.begin(), vals.end(), value - 1e-9 * std::max(1.0, std::abs(value)));
    if (it != vals.end() && nearly_equal(*it, value)) return static_cast<int>(it - vals.begin());
    return -1;
}

double LatticeEconomy::price(double unscaled_state) const {
    return std::exp(unscaled_state * scale_);
}

void LatticeEconomy::for_each_time(
    int m_max, const std::function<void(int, std::span<const double>, std::span<const double>)>& fn)
    const {
    if (m_max < 0 || m_max > n_) throw invalid_spec("lattice: time index out of range");
    if (recombining_) {
        std::vector<double> probs{1.0};
        std::vector<double> vals{0.0};
        fn(0, vals, probs);
        for (int m = 1; m <= m_max; ++m) {
            std::vector<double> next(static_cast<std::size_t>(m) + 1, 0.0);
            for (int j = 0; j < m; ++j) {
                next[static_cast<std::size_t>(j)] += 0.5 * probs[static_cast<std::size_t>(j)];
                next[static_cast<std::size_t>(j) + 1] += 0.5 * probs[static_cast<std::size_t>(j)];
            }
            probs = std::move(next);
            vals.resize(static_cast<std::size_t>(m) + 1);
            for (int j = 0; j <= m; ++j) vals[static_cast<std::size_t>(j)] = 2.0 * j - m;
            fn(m, vals, probs);
        }
        return;
    }
    for (int m = 0; m <= m_max; ++m)
        fn(m, layer_values_[static_cast<std::size_t>(m)], layer_probs_[static_cast<std::size_t>(m)]);
}

void enumerate_paths(const LatticeEconomy& economy, int up_to,
                     const std::function<void(std::span<const double>, double)>& fn) {
    if (up_to < 0 || up_to > economy.steps())
        throw invalid_spec("enumerate_paths: time index out of range");
    const auto& atoms = economy.step_dist().atoms();
    const std::size_t radix = atoms.size();
    double count = std::pow(static_cast<double>(radix), up_to);
    if (count > static_cast<double>(economy.caps().path_cap))
        throw numerical_error("enumerate_paths: path count exceeds cap");

    std::vector<int> digits(static_cast<std::size_t>(up_to), 0);
    std::vector<double> states(static_cast<std::size_t>(up_to) + 1, 0.0);
    while (true) {
        double prob = 1.0;
        for (int k = 0; k < up_to; ++k) {
            const Atom& at = atoms[static_cast<std::size_t>(digits[static_cast<std::size_t>(k)])];
            states[static_cast<std::size_t>(k) + 1] = states[static_cast<std::size_t>(k)] + at.value;
            prob *= at.prob;
        }
        fn(states, prob);
        // mixed-radix increment
        int pos = up_to - 1;
        while (pos >= 0) {
            if (++digits[static_cast<std::size_t>(pos)] < static_cast<int>(radix)) break;
            digits[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
}

std::vector<PathRecord> enumerate_paths(const LatticeEconomy& economy, int up_to) {
    std::vector<PathRecord> out;
    enumerate_paths(economy, up_to, [&](std::span<const double> states, double prob) {
        out.push_back({std::vector<double>(states.begin(), states.end()), prob});
    });
    return out;
}

} // namespace ilab
