#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <vector>

namespace phasecov {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of f over [a, b].
/// Stops once the summed error estimate is below max(abs_tol, rel_tol |I|);
/// throws QuadratureFailure if the subdivision budget runs out or f returns a
/// non-finite value.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Running integral F(t) = ∫₀ᵗ f with values cached on a fixed node lattice,
/// so repeated queries only integrate the last partial cell. Thread-safe.
class CumulativeIntegral {
public:
    explicit CumulativeIntegral(std::function<double(double)> f, double node_spacing = 0.125,
                                QuadratureOptions opts = {});

    double operator()(double t) const;
    const std::function<double(double)>& integrand() const noexcept { return f_; }

private:
    std::function<double(double)> f_;
    double spacing_;
    QuadratureOptions opts_;
    mutable std::mutex mutex_;
    mutable std::vector<double> nodes_{0.0};
};

} // namespace phasecov
