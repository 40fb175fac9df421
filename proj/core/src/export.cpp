#include "bodymass/export.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace bodymass {

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return {buf.data(), ptr};
}

const std::vector<std::string_view>& csv_columns() {
    static const std::vector<std::string_view> cols{
        "day",        "t",           "F",           "L",
        "ECF",        "BM",          "F_hat",       "L_hat",
        "ECF_hat",    "y",           "y_d",         "y_d_dot",
        "e_y",        "ei_cmd",      "delta_cmd",   "ei_applied",
        "delta_applied", "ee",       "eb",          "q",
        "r_scale",    "clamped",     "pi_selected", "full_measurement",
        "qp_status",  "sliding_s",   "qp_objective", "ei_lower",
        "ei_upper",   "ei_at_lower", "partition_residual"};
    return cols;
}

void write_csv(std::ostream& os, const SimLog& log) {
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    auto d = [](double v) { return format_double(v); };
    for (const SimRecord& r : log.records) {
        os << r.day << ',' << d(r.t) << ',' << d(r.x.f_kg) << ',' << d(r.x.l_kg) << ','
           << d(r.x.ecf_kg) << ',' << d(r.x.bm()) << ',' << d(r.xhat.f_kg) << ',' << d(r.xhat.l_kg)
           << ',' << d(r.xhat.ecf_kg) << ',' << d(r.y) << ',' << d(r.y_d) << ',' << d(r.y_d_dot)
           << ',' << d(r.e_y) << ',' << d(r.u_cmd.ei_kcal) << ',' << d(r.u_cmd.delta) << ','
           << d(r.u_applied.ei_kcal) << ',' << d(r.u_applied.delta) << ',' << d(r.ee) << ','
           << d(r.eb) << ',' << d(r.q) << ',' << d(r.r_scale) << ',' << int(r.clamped) << ','
           << int(r.pi_selected) << ',' << int(r.full_measurement) << ','
           << (r.qp_status ? to_string(*r.qp_status) : std::string_view{}) << ','
           << d(r.sliding_s) << ',' << d(r.qp_objective) << ',' << d(r.ei_lower) << ','
           << d(r.ei_upper) << ',' << int(r.ei_at_lower) << ',' << d(r.partition_residual)
           << '\n';
    }
}

namespace {

nlohmann::ordered_json composition(const BodyComposition& x) {
    return {{"F", x.f_kg}, {"L", x.l_kg}, {"ECF", x.ecf_kg}, {"BM", x.bm()}};
}

} // namespace

std::string summary_json(const SimLog& log) {
    double max_e = 0.0, peak_delta = 0.0, max_part = 0.0;
    int peak_day = 0;
    for (const SimRecord& r : log.records) {
        max_e = std::max(max_e, std::abs(r.e_y));
        max_part = std::max(max_part, r.partition_residual);
        if (r.u_cmd.delta > peak_delta) {
            peak_delta = r.u_cmd.delta;
            peak_day = r.day;
        }
    }
    nlohmann::ordered_json j;
    j["schema_version"] = kSummarySchemaVersion;
    j["name"] = log.name;
    j["seed"] = log.seed;
    j["days"] = log.records.size();
    j["final_state"] = composition(log.final_state);
    j["final_estimate"] = composition(log.final_estimate);
    j["max_abs_e_y"] = max_e;
    j["peak_delta"] = peak_delta;
    j["peak_delta_day"] = peak_day;
    j["switch_day"] = log.switch_day ? nlohmann::ordered_json(*log.switch_day) : nlohmann::ordered_json();
    j["clamp_events"] = log.clamp_events;
    j["solver"] = {{"qp_optimal", log.qp_optimal}, {"qp_relaxed", log.qp_relaxed}};
    j["max_partition_residual"] = max_part;
    j["calibration"] = {{"a", log.params.a},
                        {"b", log.params.b},
                        {"k_const", log.params.k_const},
                        {"ci_b", log.params.ci_b}};
    return j.dump(2) + "\n";
}

std::string_view to_string(PlotKind k) noexcept {
    switch (k) {
    case PlotKind::Masses: return "masses";
    case PlotKind::Delta: return "delta";
    case PlotKind::Ei: return "ei";
    case PlotKind::ObserverErrors: return "observer-errors";
    case PlotKind::Tracking: return "tracking";
    }
    return "?";
}

PlotKind parse_plot_kind(std::string_view s) {
    for (auto k : {PlotKind::Masses, PlotKind::Delta, PlotKind::Ei, PlotKind::ObserverErrors,
                   PlotKind::Tracking}) {
        if (s == to_string(k)) return k;
    }
    throw std::invalid_argument("unknown plot kind '" + std::string(s) +
                                "' (masses|delta|ei|observer-errors|tracking)");
}

void emit_plotdata(std::ostream& os, const SimLog& log, PlotKind kind) {
    auto d = [](double v) { return format_double(v); };
    switch (kind) {
    case PlotKind::Masses: os << "# t F L ECF BM\n"; break;
    case PlotKind::Delta: os << "# t delta_cmd delta_applied\n"; break;
    case PlotKind::Ei: os << "# t ei_cmd ei_applied ei_lower ei_upper\n"; break;
    case PlotKind::ObserverErrors: os << "# t err_F err_L err_ECF\n"; break;
    case PlotKind::Tracking: os << "# t y y_d e_y\n"; break;
    }
    for (const SimRecord& r : log.records) {
        os << d(r.t);
        switch (kind) {
        case PlotKind::Masses:
            os << ' ' << d(r.x.f_kg) << ' ' << d(r.x.l_kg) << ' ' << d(r.x.ecf_kg) << ' ' << d(r.x.bm());
            break;
        case PlotKind::Delta: os << ' ' << d(r.u_cmd.delta) << ' ' << d(r.u_applied.delta); break;
        case PlotKind::Ei:
            os << ' ' << d(r.u_cmd.ei_kcal) << ' ' << d(r.u_applied.ei_kcal) << ' ' << d(r.ei_lower)
               << ' ' << d(r.ei_upper);
            break;
        case PlotKind::ObserverErrors:
            os << ' ' << d(r.xhat.f_kg - r.x.f_kg) << ' ' << d(r.xhat.l_kg - r.x.l_kg) << ' '
               << d(r.xhat.ecf_kg - r.x.ecf_kg);
            break;
        case PlotKind::Tracking: os << ' ' << d(r.y) << ' ' << d(r.y_d) << ' ' << d(r.e_y); break;
        }
        os << '\n';
    }
}

} // namespace bodymass
