#include "pcs/demand.hpp"

#include "pcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pcs {

namespace {
constexpr double kZetaTol = 1e-9; // absorbs ulp noise in exec-time ratios
}

DemandFunction DemandFunction::from_table(std::vector<DemandPoint> points) {
    if (points.empty())
        throw ValidationError("demand table is empty");
    std::sort(points.begin(), points.end(),
              [](const DemandPoint& a, const DemandPoint& b) { return a.alloc < b.alloc; });
    if (points.front().alloc != 1)
        throw ValidationError("demand table must contain allocation 1");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (p.exec_time <= 0.0)
            throw ValidationError("demand table exec_time must be positive (alloc " +
                                  std::to_string(p.alloc) + ")");
        if (i > 0) {
            if (points[i - 1].alloc == p.alloc)
                throw ValidationError("duplicate allocation " + std::to_string(p.alloc) +
                                      " in demand table");
            if (p.exec_time > points[i - 1].exec_time * (1.0 + kZetaTol))
                throw ValidationError("exec_time increases at allocation " +
                                      std::to_string(p.alloc));
        }
        double s = points.front().exec_time / p.exec_time;
        if (s > static_cast<double>(p.alloc) * (1.0 + 1e-6))
            throw ValidationError("super-linear speedup at allocation " +
                                  std::to_string(p.alloc));
    }
    DemandFunction df;
    df.points_ = std::move(points);
    df.build_speedups();
    return df;
}

DemandFunction DemandFunction::linear(int max_alloc, double exec_at_one) {
    return power_law(max_alloc, exec_at_one, 1.0);
}

DemandFunction DemandFunction::power_law(int max_alloc, double exec_at_one, double alpha) {
    if (max_alloc < 1)
        throw ValidationError("max_alloc must be >= 1");
    if (exec_at_one <= 0.0)
        throw ValidationError("exec time at allocation 1 must be positive");
    if (alpha <= 0.0 || alpha > 1.0)
        throw ValidationError("speedup exponent must be in (0, 1]");
    std::vector<DemandPoint> pts;
    pts.reserve(static_cast<std::size_t>(max_alloc));
    for (int g = 1; g <= max_alloc; ++g)
        pts.push_back({g, exec_at_one / std::pow(static_cast<double>(g), alpha)});
    return from_table(std::move(pts));
}

void DemandFunction::build_speedups() {
    speedups_.resize(points_.size());
    const double exec1 = points_.front().exec_time;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double g = static_cast<double>(points_[i].alloc);
        double s = exec1 / points_[i].exec_time;
        // snap away ulp noise so linear tables report s(g) == g exactly
        if (s >= g * (1.0 - 1e-12))
            s = g;
        s = std::clamp(s, 1.0, g);
        speedups_[i] = s;
    }
}

double DemandFunction::exec_time(int alloc) const {
    if (alloc < 1 || alloc > max_alloc())
        throw ValidationError("allocation " + std::to_string(alloc) + " out of range");
    return points_.front().exec_time / speedup(static_cast<double>(alloc));
}

double DemandFunction::speedup(double alloc) const {
    if (alloc <= 0.0)
        return 0.0;
    const double max_a = static_cast<double>(max_alloc());
    if (alloc > max_a) {
        if (alloc > max_a * (1.0 + 1e-9) + 1e-12)
            throw InvariantError("speedup queried above max_alloc");
        alloc = max_a;
    }
    if (alloc <= 1.0)
        return alloc; // chord from s(0)=0 to s(1)=1
    // find bracketing tabulated points
    std::size_t hi = 1;
    while (hi < points_.size() && static_cast<double>(points_[hi].alloc) < alloc)
        ++hi;
    if (hi == points_.size())
        return speedups_.back();
    const double g0 = static_cast<double>(points_[hi - 1].alloc);
    const double g1 = static_cast<double>(points_[hi].alloc);
    const double s0 = speedups_[hi - 1];
    const double s1 = speedups_[hi];
    if (alloc == g1)
        return s1;
    const double t = (alloc - g0) / (g1 - g0);
    return s0 + t * (s1 - s0);
}

double DemandFunction::efficiency(int alloc) const {
    if (alloc < 1 || alloc > max_alloc())
        throw ValidationError("efficiency queried outside [1, max_alloc]");
    return speedup(static_cast<double>(alloc)) / static_cast<double>(alloc);
}

int DemandFunction::cap_for(double zeta_min) const {
    int best = 1;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double zeta = speedups_[i] / static_cast<double>(points_[i].alloc);
        if (zeta >= zeta_min - kZetaTol)
            best = points_[i].alloc;
    }
    return best;
}

DemandPtr make_linear_demand(int max_alloc, double exec_at_one) {
    return std::make_shared<DemandFunction>(DemandFunction::linear(max_alloc, exec_at_one));
}

} // namespace pcs
