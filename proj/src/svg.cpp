#include "dengue/svg.hpp"

#include <cmath>
#include <map>
#include <utility>

#include <fmt/format.h>

namespace dengue {

namespace {

constexpr double kWidth = 560.0;
constexpr double kHeight = 560.0;
constexpr double kMargin = 64.0;
constexpr double kPlot = kWidth - 2.0 * kMargin;

double px(double d1) { return kMargin + d1 * kPlot; }
// SVG y grows downward; d2 = 0 sits on the bottom axis.
double py(double d2) { return kHeight - kMargin - d2 * kPlot; }

std::string escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string objective_plane_svg(const Detection &detection, std::string_view title)
{
    std::string s;
    s += fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}">)",
                     kWidth, kHeight);
    s += "\n";
    s += fmt::format(R"(<rect width="{}" height="{}" fill="white"/>)", kWidth, kHeight);
    s += "\n";
    s += fmt::format(R"(<text x="{:.1f}" y="28" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>)",
                     kWidth / 2.0, escape(title));
    s += "\n";

    s += R"(<g stroke="#bbbbbb" stroke-width="0.5">)";
    s += "\n";
    for (int i = 0; i <= 5; ++i) {
        double v = i / 5.0;
        s += fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}"/>)", px(v), py(0.0), px(v), py(1.0));
        s += fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}"/>)", px(0.0), py(v), px(1.0), py(v));
        s += "\n";
    }
    s += "</g>\n";
    s += fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="none" stroke="black"/>)",
                     kMargin, kMargin, kPlot, kPlot);
    s += "\n";

    s += R"(<g font-family="sans-serif" font-size="11">)";
    s += "\n";
    for (int i = 0; i <= 5; ++i) {
        double v = i / 5.0;
        s += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" text-anchor="middle">{:.1f}</text>)", px(v), py(0.0) + 16.0, v);
        s += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" text-anchor="end">{:.1f}</text>)", px(0.0) - 6.0, py(v) + 4.0,
                         v);
        s += "\n";
    }
    s += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" text-anchor="middle">d1 (regional risk closeness)</text>)",
                     kWidth / 2.0, kHeight - 20.0);
    s += "\n";
    s += fmt::format(
        R"svg(<text x="18" y="{0:.2f}" text-anchor="middle" transform="rotate(-90 18 {0:.2f})">d2 (local variation closeness)</text>)svg",
        kHeight / 2.0);
    s += "\n</g>\n";

    s += R"(<g id="months" fill="#9aa0a6">)";
    s += "\n";
    for (const auto &p : detection.points) {
        if (p.on_front || p.near_front) {
            continue;
        }
        s += fmt::format(R"(<circle cx="{:.2f}" cy="{:.2f}" r="3"><title>{}</title></circle>)", px(p.d1), py(p.d2),
                         p.t.to_string());
        s += "\n";
    }
    s += "</g>\n";

    s += R"(<g id="flagged" font-family="sans-serif" font-size="10">)";
    s += "\n";
    // Labels of coincident markers are stacked upward.
    std::map<std::pair<long, long>, int> stacked;
    for (const auto &f : detection.flagged) {
        const bool front = f.flag == FlagKind::front;
        int &level = stacked[{std::lround(px(f.d1) * 100.0), std::lround(py(f.d2) * 100.0)}];
        s += fmt::format(R"(<circle cx="{:.2f}" cy="{:.2f}" r="5" fill="{}" stroke="#c0392b" stroke-width="1.5"/>)",
                         px(f.d1), py(f.d2), front ? "#c0392b" : "none");
        s += fmt::format(R"(<text x="{:.2f}" y="{:.2f}">{}</text>)", px(f.d1) + 7.0,
                         py(f.d2) - 6.0 - 12.0 * level, f.t.to_string());
        ++level;
        s += "\n";
    }
    s += "</g>\n</svg>\n";
    return s;
}

} // namespace dengue
