#include "phasecov/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <string>

#include "phasecov/error.hpp"

namespace phasecov {

namespace {

// Kronrod abscissae (descending) and weights; every odd-indexed node is a
// Gauss node.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b, int& evals) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    bool finite = std::isfinite(fc);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        finite = finite && std::isfinite(f1) && std::isfinite(f2);
        kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    evals += 15;
    if (!finite) {
        throw QuadratureFailure("integrand is not finite on [" + std::to_string(a) + ", " +
                                std::to_string(b) + "]");
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
    QuadratureResult result;
    if (a == b) return result;

    std::priority_queue<Segment> heap;
    const Segment first = kronrod15(f, a, b, result.evaluations);
    heap.push(first);
    double total = first.value;
    double error = first.error;
    int subdivisions = 0;

    while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (subdivisions >= opts.max_subdivisions) {
            throw QuadratureFailure("adaptive quadrature did not reach tolerance on [" +
                                    std::to_string(a) + ", " + std::to_string(b) +
                                    "] (estimated error " + std::to_string(error) + ")");
        }
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = kronrod15(f, worst.a, mid, result.evaluations);
        const Segment right = kronrod15(f, mid, worst.b, result.evaluations);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }

    // Re-sum from the leaves to avoid drift from the running updates.
    total = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    result.value = total;
    result.error = error;
    return result;
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, double node_spacing,
                                       QuadratureOptions opts)
    : f_(std::move(f)), spacing_(node_spacing), opts_(opts) {}

double CumulativeIntegral::operator()(double t) const {
    if (t < 0.0) throw DomainError("running integral queried at negative time " + std::to_string(t));
    const auto cell = static_cast<std::size_t>(std::floor(t / spacing_));
    double base = 0.0;
    {
        std::lock_guard lock(mutex_);
        while (nodes_.size() <= cell) {
            const double lo = spacing_ * static_cast<double>(nodes_.size() - 1);
            nodes_.push_back(nodes_.back() + integrate(f_, lo, lo + spacing_, opts_).value);
        }
        base = nodes_[cell];
    }
    const double lo = spacing_ * static_cast<double>(cell);
    return base + integrate(f_, lo, t, opts_).value;
}

} // namespace phasecov
