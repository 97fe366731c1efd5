#ifndef PCS_DEMAND_HPP
#define PCS_DEMAND_HPP

#include <memory>
#include <vector>

namespace pcs {

struct DemandPoint {
    int alloc;        // resource units, >= 1
    double exec_time; // seconds when running at `alloc` units
};

/// Allocation -> execution-time table for one job, with derived speedup
/// and efficiency curves. Tables are validated on construction:
/// allocations strictly increasing starting at 1, exec times positive and
/// non-increasing, speedup never super-linear.
class DemandFunction {
public:
    static DemandFunction from_table(std::vector<DemandPoint> points);
    static DemandFunction linear(int max_alloc, double exec_at_one);
    // speedup(g) = g^alpha, alpha in (0,1]; tabulated at every integer.
    static DemandFunction power_law(int max_alloc, double exec_at_one, double alpha);

    int max_alloc() const { return points_.back().alloc; }
    const std::vector<DemandPoint>& points() const { return points_; }

    // Execution time at a tabulated or interpolated integer allocation.
    double exec_time(int alloc) const;

    // Piecewise-linear speedup over fractional allocations. s(0) = 0,
    // s(1) = 1 exactly; knots at the tabulated allocations. Throws for
    // g > max_alloc beyond a small tolerance (callers cap first).
    double speedup(double alloc) const;

    // zeta(n) = exec(1) / (n * exec(n)) = s(n)/n, in (0, 1].
    double efficiency(int alloc) const;

    // Largest tabulated allocation k with efficiency(k) >= zeta_min.
    // Always >= 1 since zeta(1) = 1.
    int cap_for(double zeta_min) const;

private:
    DemandFunction() = default;
    void build_speedups();

    std::vector<DemandPoint> points_;
    std::vector<double> speedups_; // speedup at each tabulated point, clamped to [1, alloc]
};

using DemandPtr = std::shared_ptr<const DemandFunction>;

DemandPtr make_linear_demand(int max_alloc, double exec_at_one);

} // namespace pcs

#endif
