#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlfront/front.hpp"
#include "nlfront/profile.hpp"
#include "nlfront/semiflow.hpp"

namespace nlfront {

using json = nlohmann::json;

/// CSV "x,value" with round-trip-exact doubles, plus a JSON sidecar
/// {left_tail, right_tail, step} next to it (<name>.meta.json).
void write_profile_csv(const std::filesystem::path& path, const Profile& u);
Profile read_profile_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

/// Minimal polyline SVG (one curve per series).
struct SvgSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
};
void write_svg(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
               const std::string& title);

json to_json(const HypothesesReport& r);
json to_json(const RecursionTrace& t);
json to_json(const FrontResult& f);
json to_json(const SubSuperPair& p);

std::string format_double(double v);  // shortest round-trip

}  // namespace nlfront
