#pragma once

#include "atr/mip/model.hpp"

#include <filesystem>
#include <iosfwd>
#include <string_view>

namespace atr::mip {

/// CPLEX LP text: Minimize (with a bracketed "[ ... ] / 2" quadratic block
/// when present), Subject To, Bounds (every variable, in id order),
/// Binaries, Generals, End. Numbers are printed with 17 significant digits.
void write_lp(std::ostream& out, const MipModel& model);
void export_model(const MipModel& model, const std::filesystem::path& path);

/// Reads the subset of the format written by write_lp. Variable ids follow
/// the order of first appearance in the Bounds section (then any remaining
/// variables in order of first use). Throws ParseError.
MipModel read_lp(std::string_view text);
MipModel import_model(const std::filesystem::path& path);

}  // namespace atr::mip
