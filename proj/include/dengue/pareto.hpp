#pragma once

#include "dengue/month.hpp"
#include "dengue/risk.hpp"

#include <string_view>
#include <vector>

namespace dengue {

struct ObjectivePoint {
    MonthIndex t;
    double d1 = 0.0;
    double d2 = 0.0;
    /// Number of points dominating this one.
    int rank = 0;
    bool on_front = false;
    bool near_front = false;
};

/// Minimization dominance: no worse in both objectives, strictly better in one.
[[nodiscard]] constexpr bool dominates(const ObjectivePoint &a, const ObjectivePoint &b) noexcept
{
    return a.d1 <= b.d1 && a.d2 <= b.d2 && (a.d1 < b.d1 || a.d2 < b.d2);
}

/// Assigns rank = dominator count and on_front = (rank == 0). Input order is
/// preserved. Runs in O(n log n).
[[nodiscard]] std::vector<ObjectivePoint> rank_points(std::vector<ObjectivePoint> points);

/// Rank-0 points sorted by month.
[[nodiscard]] std::vector<ObjectivePoint> pareto_front(const std::vector<ObjectivePoint> &points);

inline constexpr int kDefaultRankThreshold = 2;

/// Points with 1 <= rank <= rank_threshold, sorted by month. Throws
/// ParameterError for rank_threshold < 1.
[[nodiscard]] std::vector<ObjectivePoint> near_front(const std::vector<ObjectivePoint> &points,
                                                     int rank_threshold = kDefaultRankThreshold);

enum class FlagKind { front, near };
[[nodiscard]] std::string_view to_string(FlagKind kind) noexcept;

struct FlaggedMonth {
    MonthIndex t;
    double d1 = 0.0;
    double d2 = 0.0;
    int rank = 0;
    FlagKind flag = FlagKind::front;
    /// 1 - |(d1, d2)| / sqrt(2).
    double reliability = 0.0;
};

[[nodiscard]] double reliability(double d1, double d2) noexcept;

struct Detection {
    /// Every admissible month, ranked, in calendar order.
    std::vector<ObjectivePoint> points;
    /// Front and near-front months in calendar order.
    std::vector<FlaggedMonth> flagged;

    [[nodiscard]] std::vector<MonthIndex> flagged_months() const;
};

/// Ranks the objective space and flags front plus near-front months.
[[nodiscard]] Detection detect_outbreaks(const RiskSeries &risk, int rank_threshold = kDefaultRankThreshold);

} // namespace dengue
