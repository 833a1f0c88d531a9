#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qgrom/eof.hpp"
#include "qgrom/nudge.hpp"

namespace qgrom::io {

// CSV columns use %.17g so values round-trip exactly through text.

// Header t,z1,...,zm.
void save_pcs(const std::string& path, const eof::PcSeries& pcs);
eof::PcSeries load_pcs(const std::string& path);

// Header t,eta,sigma,z1,...,zm.
void save_trajectory(const std::string& path, const nudge::RomTrajectory& traj);
nudge::RomTrajectory load_trajectory(const std::string& path);

// Two columns: name,value. Lines starting with '#' are comments.
void save_report(const std::string& path, const std::vector<std::pair<std::string, double>>& rows,
                 const std::vector<std::string>& footer_comments);

}  // namespace qgrom::io
