#pragma once

// CSV trace: header `t,learner_loss,v_shared,potential_sum,p_1..p_N,loss_1..loss_N`,
// one row per round, floats printed with 17 significant digits. v_shared is
// left empty for algorithms without a shared variance.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "squint/game.hpp"

namespace squint {

/// Formats with "%.17g"; round-trips every finite double.
std::string format_double(double x);

void write_trace_csv(std::ostream& out, std::span<const RoundRecord> trace);
void write_trace_csv(const std::filesystem::path& file, std::span<const RoundRecord> trace);

/// Reads a trace back; r is recomputed from p and loss.
std::vector<RoundRecord> read_trace_csv(std::istream& in);
std::vector<RoundRecord> read_trace_csv(const std::filesystem::path& file);

}  // namespace squint
