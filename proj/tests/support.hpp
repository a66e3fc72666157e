#pragma once

#include "dengue/month.hpp"
#include "dengue/panel.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace dengue {

inline std::ostream &operator<<(std::ostream &os, const MonthIndex &m) { return os << m.to_string(); }
inline std::ostream &operator<<(std::ostream &os, const MonthSpan &s) { return os << s.to_string(); }

} // namespace dengue

namespace test {

inline dengue::MonthIndex ym(const char *text) { return dengue::MonthIndex::parse(text); }

inline dengue::MonthlySeries series(const std::string &region, dengue::Variable v, const char *start,
                                    const std::vector<double> &values)
{
    return {region, v, ym(start), std::vector<dengue::Value>(values.begin(), values.end())};
}

inline std::vector<dengue::Value> present(const std::vector<double> &values)
{
    return {values.begin(), values.end()};
}

/// Fresh directory under the build tree's scratch area.
inline std::filesystem::path scratch_dir(const std::string &name)
{
    auto dir = std::filesystem::path(DENGUE_TEST_TMP) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
}

/// Seeded generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace test
