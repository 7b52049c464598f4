#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lattice.hpp"

namespace ilab {

enum class SignalKind { terminal_value, running_max, future_ratio };

// Insider signal, evaluated path-by-path in unscaled walk coordinates:
//   terminal_value -> final walk state,
//   running_max    -> max of S_0..S_n (S_0 = 0 included),
//   future_ratio   -> terminal-minus-anchor state, i.e. the log of the
//                     terminal/anchor price ratio times sqrt(n).
struct SignalFunctional {
    SignalKind kind = SignalKind::terminal_value;
    // Anchor time for future_ratio; negative means the economy's trading horizon.
    double anchor_t = -1.0;

    int anchor_step(const LatticeEconomy& economy) const;
};

const char* to_string(SignalKind kind);
SignalKind signal_kind_from_string(const std::string& name);

double signal_value_on_path(const SignalFunctional& signal, const LatticeEconomy& economy,
                            std::span<const double> path_states);

// State cell of the filtration at a fixed time. For path-dependent signals the
// walk position alone does not determine the conditional law, so the cell
// carries the running maximum as well (unused entries hold NaN).
struct StateCell {
    double value = 0.0;
    double run_max = 0.0;
    bool has_max = false;
    double prob = 0.0;
};

struct ZeroMassCell {
    int m = 0;
    int state_index = 0;
    int y_index = 0;
    double product_mass = 0.0; // P[state] * P[Y = y]
};

// Conditional density eta[m][state][y] = P[Y = y | state at m] / P[Y = y].
// Zero-density cells are retained and itemized so downstream consumers can
// restrict per-signal supports explicitly.
class DensityTable {
  public:
    // Rows for every time 0..m_upto (m_upto < 0 means the trading cutoff).
    static DensityTable build(const LatticeEconomy& economy, const SignalFunctional& signal,
                              int m_upto = -1);
    // Single row at time m (used by large-n solves).
    static DensityTable build_at(const LatticeEconomy& economy, const SignalFunctional& signal,
                                 int m);

    const SignalFunctional& signal() const { return signal_; }
    int steps() const { return n_; }
    double scale() const { return scale_; }
    const std::vector<int>& times() const { return times_; }
    bool has_row(int m) const;

    const std::vector<double>& signal_values() const { return y_values_; }
    const std::vector<double>& signal_probs() const { return y_probs_; }
    int signal_index(double y) const;

    const std::vector<StateCell>& states(int m) const;
    double eta(int m, int state_index, int y_index) const;
    std::span<const double> eta_row(int m, int state_index) const;

    const std::vector<ZeroMassCell>& zero_cells() const { return zero_cells_; }
    // Total product mass P[state] * P[Y=y] sitting on eta == 0 cells.
    double zero_product_mass() const { return zero_product_mass_; }

  private:
    struct Row {
        int m = 0;
        std::vector<StateCell> states;
        std::vector<double> eta; // states x y, row-major
    };

    static DensityTable build_times(const LatticeEconomy& economy, const SignalFunctional& signal,
                                    std::vector<int> times);
    void build_terminal_fast(const LatticeEconomy& economy);
    void build_running_max_fast(const LatticeEconomy& economy);
    void build_future_ratio_fast(const LatticeEconomy& economy);
    void build_by_enumeration(const LatticeEconomy& economy);
    void collect_zero_cells(const LatticeEconomy& economy);
    const Row& row(int m) const;

    SignalFunctional signal_;
    int n_ = 0;
    double scale_ = 1.0;
    std::vector<int> times_;
    std::vector<Row> rows_;
    std::vector<double> y_values_;
    std::vector<double> y_probs_;
    std::vector<ZeroMassCell> zero_cells_;
    double zero_product_mass_ = 0.0;
};

struct EquivalenceReport {
    std::vector<ZeroMassCell> violations;
    double excluded_product_mass = 0.0;
    bool strictly_positive() const { return violations.empty(); }
};

// Lists every (m, state, y) where the conditional density vanishes against
// positive product mass; empty means the strict-positivity assumption holds.
EquivalenceReport check_equivalence(const DensityTable& table);

// Joint mass carried by the flagged zero-density cells, recomputed by path
// enumeration. Anything measurably above zero indicates an inconsistent table.
double zero_cell_joint_mass(const LatticeEconomy& economy, const DensityTable& table);

// The displayed reflection-count formula for the running-maximum conditional
// density of a symmetric simple walk, reported next to the enumerated
// conditional probability P[Y = y | S_m = x] so the two can be compared.
struct RunningMaxComparison {
    double formula_value = 0.0;
    double conditional_probability = 0.0;
};
RunningMaxComparison running_max_density_formula(const LatticeEconomy& economy, int m, int y,
                                                 int x);

// Continuous conditional density of a Brownian terminal value:
//   eta_t^y(x) = (1 - t)^{-1/2} exp(-(y - x)^2 / (2 (1 - t)) + y^2 / 2).
double gaussian_eta(double t, double x, double y);

// E[ln eta_m^Y] under the physical measure, from the table's joint law.
double mean_log_eta(const DensityTable& table, int m);

} // namespace ilab
