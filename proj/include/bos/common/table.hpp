#pragma once

#include <bos/common/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace bos {

/// One-dimensional piecewise-linear table over a strictly increasing
/// abscissa. Evaluation is templated so AD numbers flow through; the
/// derivative of a lookup is the segment slope. Two extrapolation
/// policies are used by the simulator:
///   - clamp:  constant beyond both ends (saturation functions),
///   - pvt:    constant below the first node, linear above the last
///             (PVT tables; callers flag the upward extrapolation).
class PiecewiseLinear {
public:
    PiecewiseLinear() = default;

    PiecewiseLinear(std::vector<double> x, std::vector<double> y, std::string name = {})
        : x_(std::move(x)), y_(std::move(y)), name_(std::move(name))
    {
        if (x_.size() != y_.size() || x_.empty()) {
            throw ConfigError("table '" + name_ + "': column sizes invalid");
        }
        for (std::size_t i = 1; i < x_.size(); ++i) {
            if (!(x_[i] > x_[i - 1])) {
                throw ConfigError("table '" + name_ + "': abscissa not strictly increasing at row "
                                  + std::to_string(i));
            }
        }
    }

    std::size_t size() const { return x_.size(); }
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    double y_front() const { return y_.front(); }
    double y_back() const { return y_.back(); }
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

    /// Constant value outside the support; inside, linear. The segment
    /// containing the query is chosen so that a query on a node uses the
    /// segment to its right (except at the last node).
    template <class Value>
    Value eval_clamped(const Value& x) const
    {
        const double v = value_of_(x);
        if (v <= x_.front()) {
            return constant_like(x, y_.front());
        }
        if (v >= x_.back()) {
            return constant_like(x, y_.back());
        }
        return segment_eval(x, segment_index(v));
    }

    /// Constant below the support, linear continuation above it.
    /// Sets *extrapolated_above when the query lies beyond the last node.
    template <class Value>
    Value eval_extrapolating(const Value& x, bool* extrapolated_above = nullptr) const
    {
        const double v = value_of_(x);
        if (v <= x_.front()) {
            return constant_like(x, y_.front());
        }
        if (v > x_.back()) {
            if (extrapolated_above) {
                *extrapolated_above = true;
            }
            if (x_.size() == 1) {
                return constant_like(x, y_.back());
            }
            return segment_eval(x, x_.size() - 2);
        }
        return segment_eval(x, segment_index(v));
    }

    /// Inverse lookup for a monotone ordinate, clamped to the support.
    /// Works for both increasing and decreasing y columns.
    double invert_clamped(double y) const
    {
        const bool increasing = y_.back() >= y_.front();
        const double ylo = increasing ? y_.front() : y_.back();
        const double yhi = increasing ? y_.back() : y_.front();
        if (y <= ylo) {
            return increasing ? x_.front() : x_.back();
        }
        if (y >= yhi) {
            return increasing ? x_.back() : x_.front();
        }
        for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
            const double y0 = y_[i];
            const double y1 = y_[i + 1];
            const bool inside = increasing ? (y >= y0 && y <= y1) : (y <= y0 && y >= y1);
            if (inside && y0 != y1) {
                const double t = (y - y0) / (y1 - y0);
                return x_[i] + t * (x_[i + 1] - x_[i]);
            }
        }
        // Flat segment containing y; return its left end.
        for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
            if (y_[i] == y) {
                return x_[i];
            }
        }
        return x_.back();
    }

    /// True when the ordinate spans less than eps; capillary inversion
    /// falls back to the sharp-contact rule in that case.
    bool degenerate_ordinate(double eps) const
    {
        const auto [lo, hi] = std::minmax_element(y_.begin(), y_.end());
        return (*hi - *lo) < eps;
    }

private:
    static double value_of_(double x) { return x; }

    template <class E>
    static double value_of_(const E& x) { return x.value(); }

    static double constant_like(double, double y) { return y; }

    template <class E>
    static E constant_like(const E&, double y) { return E::constant(y); }

    std::size_t segment_index(double v) const
    {
        // first node with x > v, minus one
        const auto it = std::upper_bound(x_.begin(), x_.end(), v);
        return static_cast<std::size_t>(std::distance(x_.begin(), it)) - 1;
    }

    template <class Value>
    Value segment_eval(const Value& x, std::size_t i) const
    {
        const double slope = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        return (x - x_[i]) * slope + y_[i];
    }

    std::vector<double> x_;
    std::vector<double> y_;
    std::string name_;
};

} // namespace bos
