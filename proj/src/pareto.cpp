#include "dengue/pareto.hpp"

#include "dengue/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace dengue {

namespace {

/// Fenwick tree over d2 ranks.
class CountTree {
public:
    explicit CountTree(std::size_t n) : tree_(n + 1, 0) {}
    void add(std::size_t i)
    {
        for (++i; i < tree_.size(); i += i & (~i + 1)) {
            ++tree_[i];
        }
    }
    /// Number of inserted indices <= i.
    [[nodiscard]] int prefix(std::size_t i) const
    {
        int s = 0;
        for (++i; i > 0; i -= i & (~i + 1)) {
            s += tree_[i];
        }
        return s;
    }

private:
    std::vector<int> tree_;
};

void by_month(std::vector<ObjectivePoint> &v)
{
    std::stable_sort(v.begin(), v.end(), [](const ObjectivePoint &a, const ObjectivePoint &b) { return a.t < b.t; });
}

} // namespace

std::vector<ObjectivePoint> rank_points(std::vector<ObjectivePoint> points)
{
    const std::size_t n = points.size();
    if (n == 0) {
        return points;
    }
    // Compress d2 so ties share an index.
    std::vector<double> d2s(n);
    std::transform(points.begin(), points.end(), d2s.begin(), [](const ObjectivePoint &p) { return p.d2; });
    std::sort(d2s.begin(), d2s.end());
    d2s.erase(std::unique(d2s.begin(), d2s.end()), d2s.end());
    auto d2_index = [&](double d2) {
        return static_cast<std::size_t>(std::lower_bound(d2s.begin(), d2s.end(), d2) - d2s.begin());
    };

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto &pa = points[a];
        const auto &pb = points[b];
        return pa.d1 != pb.d1 ? pa.d1 < pb.d1 : pa.d2 < pb.d2;
    });

    // Points with d1 <= p.d1 and d2 <= p.d2, minus exact duplicates of p
    // (including p itself), are exactly p's dominators.
    CountTree tree(d2s.size());
    std::size_t g = 0;
    while (g < n) {
        std::size_t end = g;
        while (end < n && points[order[end]].d1 == points[order[g]].d1) {
            tree.add(d2_index(points[order[end]].d2));
            ++end;
        }
        std::size_t k = g;
        while (k < end) {
            std::size_t dup_end = k;
            while (dup_end < end && points[order[dup_end]].d2 == points[order[k]].d2) {
                ++dup_end;
            }
            int weakly = tree.prefix(d2_index(points[order[k]].d2));
            int rank = weakly - static_cast<int>(dup_end - k);
            for (std::size_t d = k; d < dup_end; ++d) {
                auto &p = points[order[d]];
                p.rank = rank;
                p.on_front = rank == 0;
                p.near_front = false;
            }
            k = dup_end;
        }
        g = end;
    }
    return points;
}

std::vector<ObjectivePoint> pareto_front(const std::vector<ObjectivePoint> &points)
{
    auto ranked = rank_points(points);
    std::vector<ObjectivePoint> front;
    std::copy_if(ranked.begin(), ranked.end(), std::back_inserter(front),
                 [](const ObjectivePoint &p) { return p.rank == 0; });
    by_month(front);
    return front;
}

std::vector<ObjectivePoint> near_front(const std::vector<ObjectivePoint> &points, int rank_threshold)
{
    if (rank_threshold < 1) {
        throw ParameterError(fmt::format("near-front rank threshold must be >= 1, got {}", rank_threshold));
    }
    auto ranked = rank_points(points);
    std::vector<ObjectivePoint> near;
    for (auto &p : ranked) {
        if (p.rank >= 1 && p.rank <= rank_threshold) {
            p.near_front = true;
            near.push_back(p);
        }
    }
    by_month(near);
    return near;
}

std::string_view to_string(FlagKind kind) noexcept { return kind == FlagKind::front ? "front" : "near"; }

double reliability(double d1, double d2) noexcept { return 1.0 - std::hypot(d1, d2) / std::sqrt(2.0); }

std::vector<MonthIndex> Detection::flagged_months() const
{
    std::vector<MonthIndex> out;
    out.reserve(flagged.size());
    for (const auto &f : flagged) {
        out.push_back(f.t);
    }
    return out;
}

Detection detect_outbreaks(const RiskSeries &risk, int rank_threshold)
{
    if (rank_threshold < 1) {
        throw ParameterError(fmt::format("near-front rank threshold must be >= 1, got {}", rank_threshold));
    }
    std::vector<ObjectivePoint> points;
    points.reserve(risk.months.size());
    for (const auto &m : risk.months) {
        points.push_back({m.t, m.d1, m.d2});
    }
    Detection out;
    out.points = rank_points(std::move(points));
    by_month(out.points);
    for (auto &p : out.points) {
        p.near_front = p.rank >= 1 && p.rank <= rank_threshold;
        if (p.on_front || p.near_front) {
            out.flagged.push_back({p.t, p.d1, p.d2, p.rank, p.on_front ? FlagKind::front : FlagKind::near,
                                   reliability(p.d1, p.d2)});
        }
    }
    return out;
}

} // namespace dengue
