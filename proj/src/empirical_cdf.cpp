#include "lobsim/empirical_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lobsim/csv.hpp"

namespace lobsim {

EmpiricalCdf::EmpiricalCdf(std::vector<double> support, std::vector<double> cumulative)
    : support_(std::move(support)), cumulative_(std::move(cumulative)) {
    if (support_.empty() || support_.size() != cumulative_.size())
        throw std::invalid_argument("cdf: support and probabilities must be nonempty, same size");
    for (std::size_t i = 0; i < support_.size(); ++i) {
        if (!std::isfinite(support_[i]) || support_[i] < -1.0 || support_[i] > 1.0)
            throw std::invalid_argument("cdf: support must lie within [-1, 1]");
        if (i > 0 && support_[i] <= support_[i - 1])
            throw std::invalid_argument("cdf: support must be strictly increasing");
        if (cumulative_[i] < 0.0 || (i > 0 && cumulative_[i] < cumulative_[i - 1]))
            throw std::invalid_argument("cdf: probabilities must be non-decreasing");
    }
    if (std::abs(cumulative_.back() - 1.0) > 1e-9)
        throw std::invalid_argument("cdf: final cumulative probability must be 1");
    cumulative_.back() = 1.0;
}

EmpiricalCdf EmpiricalCdf::from_samples(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("cdf: no samples");
    std::sort(samples.begin(), samples.end());
    std::vector<double> xs, ps;
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
        xs.push_back(samples[i]);
        ps.push_back(static_cast<double>(i + 1) / n);
    }
    return EmpiricalCdf(std::move(xs), std::move(ps));
}

double EmpiricalCdf::inverse(double u) const {
    if (u < 0.0 || u > 1.0) throw std::invalid_argument("cdf: u must be in [0, 1]");
    if (u <= cumulative_.front()) return support_.front();
    // First index with cumulative >= u; interpolate within (i-1, i].
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    const std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
    const double f0 = cumulative_[i - 1], f1 = cumulative_[i];
    if (f1 <= f0) return support_[i];
    const double w = (u - f0) / (f1 - f0);
    return support_[i - 1] + w * (support_[i] - support_[i - 1]);
}

double EmpiricalCdf::cdf(double x) const {
    if (x < support_.front()) return 0.0;
    if (x >= support_.back()) return 1.0;
    const auto it = std::upper_bound(support_.begin(), support_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - support_.begin());  // support_[i] > x >= support_[i-1]
    const double x0 = support_[i - 1], x1 = support_[i];
    const double f0 = cumulative_[i - 1], f1 = cumulative_[i];
    return f0 + (f1 - f0) * (x - x0) / (x1 - x0);
}

void EmpiricalCdf::write_csv(std::ostream& os) const {
    os << "x,F\n";
    for (std::size_t i = 0; i < support_.size(); ++i)
        os << csv::fmt(support_[i]) << ',' << csv::fmt(cumulative_[i]) << '\n';
}

EmpiricalCdf EmpiricalCdf::read_csv(std::istream& is) {
    std::vector<double> xs, ps;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("x,", 0) == 0) continue;  // header
        }
        const auto fields = csv::split(line);
        if (fields.size() != 2) throw std::runtime_error("cdf csv: expected two columns");
        xs.push_back(std::stod(fields[0]));
        ps.push_back(std::stod(fields[1]));
    }
    return EmpiricalCdf(std::move(xs), std::move(ps));
}

double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b) {
    double d = 0.0;
    for (double x : a.support()) d = std::max(d, std::abs(a.cdf(x) - b.cdf(x)));
    for (double x : b.support()) d = std::max(d, std::abs(a.cdf(x) - b.cdf(x)));
    return d;
}

}  // namespace lobsim
