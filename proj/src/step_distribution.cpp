#include "step_distribution.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace ilab {

namespace {
constexpr double kAcceptTol = 1e-9;
} // namespace

StepDistribution StepDistribution::rademacher() {
    StepDistribution d;
    d.atoms_ = {{-1.0, 0.5}, {+1.0, 0.5}};
    d.third_moment_ = 0.0;
    d.rademacher_ = true;
    return d;
}

StepDistribution StepDistribution::skewed_three_point(double v_minus, double v_mid, double v_plus) {
    if (!(v_minus < v_mid && v_mid < v_plus))
        throw invalid_spec("skewed_three_point: values must satisfy v_minus < v_mid < v_plus");
    // Weights p_x = M[l_x] for the Lagrange basis l_x against the moment
    // functional M[1] = 1, M[z] = 0, M[z^2] = 1.
    const double a = v_minus, b = v_mid, c = v_plus;
    const double det = (b - a) * (c - a) * (c - b);
    if (std::abs(det) < 1e-14) throw invalid_spec("skewed_three_point: degenerate value triple");
    const double p_minus = (b * c + 1.0) / ((b - a) * (c - a));
    const double p_mid = -(a * c + 1.0) / ((b - a) * (c - b));
    const double p_plus = (a * b + 1.0) / ((c - a) * (c - b));
    for (double p : {p_minus, p_mid, p_plus})
        if (!(p > 1e-12) || !(p <= 1.0))
            throw invalid_spec("skewed_three_point: moment constraints need a weight outside (0,1]");
    StepDistribution d;
    d.atoms_ = {{a, p_minus}, {b, p_mid}, {c, p_plus}};
    d.finalize();
    return d;
}

StepDistribution StepDistribution::from_atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) throw invalid_spec("step distribution: atom list is empty");
    double mass = 0.0, mean = 0.0, second = 0.0;
    for (const Atom& at : atoms) {
        if (!std::isfinite(at.value)) throw invalid_spec("step distribution: non-finite atom value");
        if (!(at.prob > 0.0) || at.prob > 1.0 + kAcceptTol)
            throw invalid_spec("step distribution: atom probability outside (0,1]");
        mass += at.prob;
        mean += at.prob * at.value;
        second += at.prob * at.value * at.value;
    }
    if (std::abs(mass - 1.0) > kAcceptTol)
        throw invalid_spec("step distribution: probabilities do not sum to 1");
    mean /= mass;
    const double var = second / mass - mean * mean;
    if (std::abs(mean) > kAcceptTol) throw invalid_spec("step distribution: mean is not 0");
    if (std::abs(var - 1.0) > kAcceptTol) throw invalid_spec("step distribution: variance is not 1");
    // Renormalize so the invariants hold to machine precision.
    const double sd = std::sqrt(var);
    for (Atom& at : atoms) {
        at.prob /= mass;
        at.value = (at.value - mean) / sd;
    }
    StepDistribution d;
    d.atoms_ = std::move(atoms);
    d.finalize();
    return d;
}

void StepDistribution::finalize() {
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& l, const Atom& r) { return l.value < r.value; });
    third_moment_ = 0.0;
    for (const Atom& at : atoms_) third_moment_ += at.prob * at.value * at.value * at.value;
    rademacher_ = atoms_.size() == 2 && std::abs(atoms_[0].value + 1.0) < 1e-15 &&
                  std::abs(atoms_[1].value - 1.0) < 1e-15 && std::abs(atoms_[0].prob - 0.5) < 1e-15;
}

double StepDistribution::max_abs_value() const {
    double m = 0.0;
    for (const Atom& at : atoms_) m = std::max(m, std::abs(at.value));
    return m;
}

double StepDistribution::mean() const {
    double s = 0.0;
    for (const Atom& at : atoms_) s += at.prob * at.value;
    return s;
}

double StepDistribution::variance() const {
    const double mu = mean();
    double s = 0.0;
    for (const Atom& at : atoms_) s += at.prob * (at.value - mu) * (at.value - mu);
    return s;
}

double StepDistribution::mgf(double u) const {
    double s = 0.0;
    for (const Atom& at : atoms_) s += at.prob * std::exp(u * at.value);
    return s;
}

} // namespace ilab
