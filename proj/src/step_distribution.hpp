#pragma once

#include <span>
#include <vector>

namespace ilab {

struct Atom {
    double value = 0.0;
    double prob = 0.0;
};

// Finite-support step law with mean 0 and unit variance. The third moment is
// cached because it drives the first-order drift correction of the calibrated
// martingale measure.
class StepDistribution {
  public:
    static StepDistribution rademacher();
    // Three-point law on {v_minus, v_mid, v_plus}; the weights are the unique
    // solution of the (total mass, mean, variance) constraints and must all be
    // strictly positive.
    static StepDistribution skewed_three_point(double v_minus, double v_mid, double v_plus);
    // Explicit atoms: accepted when the moment constraints hold within 1e-9,
    // then renormalized to exact mean 0 / variance 1.
    static StepDistribution from_atoms(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    double third_moment() const { return third_moment_; }
    bool is_rademacher() const { return rademacher_; }
    double max_abs_value() const;

    double mean() const;
    double variance() const;
    // Moment generating function E[exp(u * step)].
    double mgf(double u) const;

  private:
    StepDistribution() = default;
    void finalize();

    std::vector<Atom> atoms_; // sorted by value
    double third_moment_ = 0.0;
    bool rademacher_ = false;
};

} // namespace ilab
