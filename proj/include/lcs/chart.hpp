#pragma once

#include "lcs/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lcs {

using VarId = int;

struct Coordinate {
    std::string name;
    bool periodic = false;
    // Sampling interval; defaults are [-1,1] for affine coordinates and
    // [0,2*pi) for periodic ones.
    Rational lo;
    Rational hi;
};

class Chart;
using ChartPtr = std::shared_ptr<const Chart>;

// An ordered coordinate system. Charts are immutable and shared; two charts
// are interchangeable when their coordinate lists agree.
class Chart {
public:
    static constexpr int kMaxDim = 10;

    static ChartPtr make(std::string name, std::vector<Coordinate> coords);

    // Convenience: space-separated coordinate names, e.g. "x1 y1 x2 y2";
    // names listed in `periodic` get circle sampling.
    static ChartPtr make(std::string name, const std::string& coord_names,
                         const std::string& periodic_names = "");

    const std::string& name() const { return name_; }
    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<Coordinate>& coords() const { return coords_; }
    const Coordinate& coord(VarId v) const { return coords_[static_cast<std::size_t>(v)]; }
    const std::string& coord_name(VarId v) const { return coord(v).name; }
    bool is_periodic(VarId v) const { return coord(v).periodic; }

    std::optional<VarId> find(std::string_view name) const;
    VarId require(std::string_view name) const; // throws UndeclaredVariable

    bool same_coords(const Chart& other) const;

private:
    Chart(std::string name, std::vector<Coordinate> coords)
        : name_(std::move(name)), coords_(std::move(coords)) {}

    std::string name_;
    std::vector<Coordinate> coords_;
};

bool same_chart(const ChartPtr& a, const ChartPtr& b);
void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* where);

// Deterministic sampling policy for the probabilistic zero test.
struct SamplePlan {
    int samples = 25;
    std::uint64_t seed = 0x1c5u;
    double tol = 1e-9;

    void validate() const; // samples >= 1, tol > 0
};

// A sample point stores exact rational coordinates (so freezing a coordinate
// at a sample stays inside the expression class) plus their double images.
struct Point {
    std::vector<Rational> x;
    std::vector<double> xd;

    std::string str(const Chart& chart) const;
};

// The base sample set for (chart, plan): `plan.samples` points, then callers
// may request extension points for singularity redraws. Identical seed gives
// an identical stream.
class SampleStream {
public:
    SampleStream(ChartPtr chart, const SamplePlan& plan);

    const Point& at(std::size_t i); // grows on demand
    std::size_t base_count() const { return base_count_; }
    const ChartPtr& chart() const { return chart_; }

private:
    void grow();

    ChartPtr chart_;
    std::size_t base_count_;
    std::uint64_t state_;
    std::vector<Point> points_;
};

std::vector<Point> draw_points(const ChartPtr& chart, const SamplePlan& plan);

} // namespace lcs
