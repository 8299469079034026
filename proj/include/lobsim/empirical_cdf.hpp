#pragma once

#include <iosfwd>
#include <vector>

namespace lobsim {

/// Empirical distribution of relative prices on [-1, 1], stored as support
/// points x_1 < ... < x_m with cumulative probabilities F_1 <= ... <= F_m = 1.
/// Everything below F_1 maps to x_1 (an atom at the left endpoint); between
/// support points the CDF is linear.
class EmpiricalCdf {
public:
    EmpiricalCdf(std::vector<double> support, std::vector<double> cumulative);

    /// Step empirical CDF of a sample (distinct sorted values, F = rank/n).
    static EmpiricalCdf from_samples(std::vector<double> samples);

    /// Generalized inverse F^{-1}(u) with linear interpolation, u in [0, 1].
    double inverse(double u) const;

    /// F(x): 0 below x_1, 1 at/after x_m, linear in between (jump to F_1 at x_1).
    double cdf(double x) const;

    const std::vector<double>& support() const { return support_; }
    const std::vector<double>& cumulative() const { return cumulative_; }

    void write_csv(std::ostream& os) const;      // two columns: x,F
    static EmpiricalCdf read_csv(std::istream& is);

private:
    std::vector<double> support_;
    std::vector<double> cumulative_;
};

/// Largest vertical distance between two CDFs, evaluated at both supports.
double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b);

}  // namespace lobsim
