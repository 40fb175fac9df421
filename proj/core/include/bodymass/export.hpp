#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "bodymass/scenario.hpp"

namespace bodymass {

inline constexpr int kSummarySchemaVersion = 1;

/// Shortest text that parses back to the same double.
[[nodiscard]] std::string format_double(double v);

/// Column order of the per-day CSV.
[[nodiscard]] const std::vector<std::string_view>& csv_columns();

void write_csv(std::ostream& os, const SimLog& log);

/// JSON summary: final state, max |e_y|, peak delta, switch day, solver counts.
[[nodiscard]] std::string summary_json(const SimLog& log);

enum class PlotKind { Masses, Delta, Ei, ObserverErrors, Tracking };

[[nodiscard]] std::string_view to_string(PlotKind k) noexcept;
[[nodiscard]] PlotKind parse_plot_kind(std::string_view s);

/// Whitespace-separated table with a `#` header line: t followed by the series.
void emit_plotdata(std::ostream& os, const SimLog& log, PlotKind kind);

} // namespace bodymass
