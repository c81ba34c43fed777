#include "lcs/chart.hpp"

#include "lcs/errors.hpp"

#include <sstream>
#include <unordered_set>

namespace lcs {

namespace {

// Rational stand-in for the circle circumference used by sampling boxes.
// Only needs to lie just below 2*pi; sample values are interpreted in radians.
const Rational kTwoPiish(6283185, 1000000);

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

} // namespace

ChartPtr Chart::make(std::string name, std::vector<Coordinate> coords) {
    if (coords.empty())
        fail(ErrorCode::SceneError, "chart '" + name + "' has no coordinates");
    if (static_cast<int>(coords.size()) > kMaxDim)
        fail(ErrorCode::DimensionCap,
             "chart '" + name + "' exceeds the supported dimension cap of " +
                 std::to_string(kMaxDim));
    std::unordered_set<std::string> seen;
    for (auto& c : coords) {
        if (c.name.empty())
            fail(ErrorCode::SceneError, "empty coordinate name in chart '" + name + "'");
        if (!seen.insert(c.name).second)
            fail(ErrorCode::SceneError,
                 "duplicate coordinate '" + c.name + "' in chart '" + name + "'");
        if (c.lo == c.hi) {
            if (c.periodic) {
                c.lo = 0;
                c.hi = kTwoPiish;
            } else {
                c.lo = -1;
                c.hi = 1;
            }
        }
        if (c.lo >= c.hi)
            fail(ErrorCode::SceneError,
                 "empty sampling interval for coordinate '" + c.name + "'");
    }
    return ChartPtr(new Chart(std::move(name), std::move(coords)));
}

ChartPtr Chart::make(std::string name, const std::string& coord_names,
                     const std::string& periodic_names) {
    std::vector<Coordinate> coords;
    for (auto& n : split_ws(coord_names)) coords.push_back(Coordinate{n, false, 0, 0});
    for (auto& p : split_ws(periodic_names)) {
        bool found = false;
        for (auto& c : coords)
            if (c.name == p) {
                c.periodic = true;
                found = true;
            }
        if (!found)
            fail(ErrorCode::SceneError,
                 "periodic coordinate '" + p + "' is not in the coordinate list");
    }
    return make(std::move(name), std::move(coords));
}

std::optional<VarId> Chart::find(std::string_view name) const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
        if (coords_[i].name == name) return static_cast<VarId>(i);
    return std::nullopt;
}

VarId Chart::require(std::string_view name) const {
    if (auto v = find(name)) return *v;
    fail(ErrorCode::UndeclaredVariable,
         "undeclared variable '" + std::string(name) + "' on chart '" + name_ + "'");
}

bool Chart::same_coords(const Chart& other) const {
    if (coords_.size() != other.coords_.size()) return false;
    for (std::size_t i = 0; i < coords_.size(); ++i)
        if (coords_[i].name != other.coords_[i].name ||
            coords_[i].periodic != other.coords_[i].periodic)
            return false;
    return true;
}

bool same_chart(const ChartPtr& a, const ChartPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->same_coords(*b);
}

void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* where) {
    if (!same_chart(a, b))
        fail(ErrorCode::ChartMismatch, std::string(where) + ": operands live on different charts");
}

void SamplePlan::validate() const {
    if (samples < 1) fail(ErrorCode::SceneError, "sample count must be >= 1");
    if (!(tol > 0)) fail(ErrorCode::SceneError, "zero tolerance must be positive");
}

std::string Point::str(const Chart& chart) const {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) out << ", ";
        out << chart.coord_name(static_cast<VarId>(i)) << "=" << to_string(x[i]);
    }
    out << ")";
    return out.str();
}

namespace {

// splitmix64; keeps the sample stream independent of library RNG details.
std::uint64_t next_u64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

SampleStream::SampleStream(ChartPtr chart, const SamplePlan& plan)
    : chart_(std::move(chart)),
      base_count_(static_cast<std::size_t>(plan.samples)),
      state_(plan.seed ^ 0x5a75a75a75a75a0dull) {
    plan.validate();
}

void SampleStream::grow() {
    constexpr long kGrid = 1 << 20;
    Point p;
    p.x.reserve(static_cast<std::size_t>(chart_->dim()));
    p.xd.reserve(static_cast<std::size_t>(chart_->dim()));
    for (const auto& c : chart_->coords()) {
        long ticks = static_cast<long>(next_u64(state_) % static_cast<std::uint64_t>(kGrid + 1));
        Rational t(ticks, kGrid);
        t.canonicalize();
        Rational v = c.lo + t * (c.hi - c.lo);
        v.canonicalize();
        p.x.push_back(v);
        p.xd.push_back(to_double(v));
    }
    points_.push_back(std::move(p));
}

const Point& SampleStream::at(std::size_t i) {
    while (points_.size() <= i) grow();
    return points_[i];
}

std::vector<Point> draw_points(const ChartPtr& chart, const SamplePlan& plan) {
    SampleStream stream(chart, plan);
    std::vector<Point> out;
    for (std::size_t i = 0; i < stream.base_count(); ++i) out.push_back(stream.at(i));
    return out;
}

} // namespace lcs
