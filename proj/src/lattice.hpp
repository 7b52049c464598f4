#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "step_distribution.hpp"

namespace ilab {

// Simple-random-walk pmf after k unit steps; entry j is P[j up-moves], the
// walk value being 2j - k in unscaled coordinates.
std::vector<double> srw_pmf(int k);
// Probability that the unscaled walk sits at `value` after k steps.
double srw_prob(std::span<const double> pmf, int k, int value);
// Law of the running maximum of a k-step simple walk: entry h = P[max = h],
// h = 0..k. Reflection identity: P[max = h] = P[walk = h] + P[walk = h + 1].
std::vector<double> srw_max_pmf(int k);

struct LatticeCaps {
    std::uint64_t path_cap = std::uint64_t{1} << 20;
    std::uint64_t state_cap = std::uint64_t{1} << 21;
};

// Scaled n-step random-walk economy on [0, 1] with trading restricted to
// [0, t]. Walk states are kept in unscaled coordinates (partial sums of raw
// steps); the traded log-price at time m is state / sqrt(n). Rademacher walks
// use the closed recombining representation; other supports materialize merged
// per-time layers, guarded by a state cap. Immutable after construction.
class LatticeEconomy {
  public:
    static LatticeEconomy build(const StepDistribution& dist, int n, double t,
                                const LatticeCaps& caps = {});

    int steps() const { return n_; }
    double horizon() const { return t_; }
    int trading_steps() const { return m_of_t_; } // floor(n * t)
    bool recombining() const { return recombining_; }
    const StepDistribution& step_dist() const { return dist_; }
    double scale() const { return scale_; } // 1 / sqrt(n)

    // Reachable unscaled states at time m (ascending) and their probabilities.
    std::vector<double> state_values(int m) const;
    std::vector<double> state_probs(int m) const;
    // Index of an unscaled state value at time m, -1 when absent.
    int state_index(int m, double value) const;
    // Price at a node: exp(value / sqrt(n)).
    double price(double unscaled_state) const;

    // Rolls the state pmf forward once per time 0..m_max, avoiding repeated
    // O(m^2) rebuilds in whole-horizon scans.
    void for_each_time(int m_max,
                       const std::function<void(int, std::span<const double>,
                                                std::span<const double>)>& fn) const;

    const LatticeCaps& caps() const { return caps_; }

  private:
    LatticeEconomy() = default;

    StepDistribution dist_;
    int n_ = 0;
    double t_ = 1.0;
    int m_of_t_ = 0;
    double scale_ = 1.0;
    bool recombining_ = false;
    LatticeCaps caps_;
    // Layered storage for non-rademacher supports.
    std::vector<std::vector<double>> layer_values_;
    std::vector<std::vector<double>> layer_probs_;
};

struct PathRecord {
    std::vector<double> states; // unscaled partial sums, S_0 = 0 included
    double prob = 0.0;
};

// Visits every path of `up_to` steps with its product probability. Throws when
// the path count exceeds the economy's cap.
void enumerate_paths(const LatticeEconomy& economy, int up_to,
                     const std::function<void(std::span<const double>, double)>& fn);
// Materialized variant for small lattices.
std::vector<PathRecord> enumerate_paths(const LatticeEconomy& economy, int up_to);

} // namespace ilab
