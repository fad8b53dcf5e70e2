#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace hrg {

/// One-pass central moments up to order four (Pébay update formulas).
/// Mergeable, so aggregation is associative and order-independent.
class RunningMoments {
public:
    void add(double x) noexcept {
        const double n1 = static_cast<double>(n_);
        ++n_;
        const double n = static_cast<double>(n_);
        const double delta = x - mean_;
        const double delta_n = delta / n;
        const double delta_n2 = delta_n * delta_n;
        const double term1 = delta * delta_n * n1;
        mean_ += delta_n;
        m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ - 4.0 * delta_n * m3_;
        m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
        m2_ += term1;
    }

    void merge(const RunningMoments& o) noexcept {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
        const double n = na + nb;
        const double delta = o.mean_ - mean_;
        const double d2 = delta * delta, d3 = d2 * delta, d4 = d3 * delta;
        const double m2 = m2_ + o.m2_ + d2 * na * nb / n;
        const double m3 = m3_ + o.m3_ + d3 * na * nb * (na - nb) / (n * n) +
                          3.0 * delta * (na * o.m2_ - nb * m2_) / n;
        const double m4 = m4_ + o.m4_ +
                          d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                          6.0 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) +
                          4.0 * delta * (na * o.m3_ - nb * m3_) / n;
        mean_ += delta * nb / n;
        m2_ = m2;
        m3_ = m3;
        m4_ = m4;
        n_ += o.n_;
    }

    std::uint64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    /// Sample variance (n-1 denominator).
    double variance() const noexcept {
        return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    }
    double stddev() const noexcept { return std::sqrt(variance()); }
    double std_error() const noexcept {
        return n_ > 0 ? stddev() / std::sqrt(static_cast<double>(n_)) : 0.0;
    }
    double skewness() const noexcept {
        if (n_ < 2 || m2_ <= 0.0) return 0.0;
        const double n = static_cast<double>(n_);
        return std::sqrt(n) * m3_ / std::pow(m2_, 1.5);
    }
    double kurtosis_excess() const noexcept {
        if (n_ < 2 || m2_ <= 0.0) return 0.0;
        const double n = static_cast<double>(n_);
        return n * m4_ / (m2_ * m2_) - 3.0;
    }

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0, m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
};

/// Integer-valued histogram over counts 0, 1, 2, ...
class Histogram {
public:
    void add(std::uint64_t bin, std::uint64_t weight = 1) {
        if (bin >= counts_.size()) counts_.resize(bin + 1, 0);
        counts_[bin] += weight;
        total_ += weight;
    }

    void merge(const Histogram& o) {
        if (o.counts_.size() > counts_.size()) counts_.resize(o.counts_.size(), 0);
        for (std::size_t i = 0; i < o.counts_.size(); ++i) counts_[i] += o.counts_[i];
        total_ += o.total_;
    }

    std::uint64_t total() const noexcept { return total_; }
    std::uint64_t count(std::uint64_t bin) const noexcept {
        return bin < counts_.size() ? counts_[bin] : 0;
    }
    std::size_t max_bin() const noexcept { return counts_.empty() ? 0 : counts_.size() - 1; }
    double freq(std::uint64_t bin) const noexcept {
        return total_ == 0 ? 0.0 : static_cast<double>(count(bin)) / static_cast<double>(total_);
    }
    const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

    /// Total-variation distance against a model pmf; the model's mass beyond
    /// the evaluated range is charged in full.
    double tv_against(const std::function<double(std::uint64_t)>& pmf,
                      std::uint64_t tail_bins = 256) const {
        const std::uint64_t upto = std::max<std::uint64_t>(max_bin(), tail_bins);
        double sum = 0.0, model_mass = 0.0;
        for (std::uint64_t j = 0; j <= upto; ++j) {
            const double m = pmf(j);
            model_mass += m;
            sum += std::abs(freq(j) - m);
        }
        return 0.5 * (sum + std::max(0.0, 1.0 - model_mass));
    }

private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

} // namespace hrg
