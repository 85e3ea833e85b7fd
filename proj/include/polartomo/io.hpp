#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "polartomo/design_search.hpp"
#include "polartomo/protocol_sim.hpp"
#include "polartomo/tomography.hpp"

namespace polartomo::io {

/// Malformed input document or field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text that reads back to the same double ("22.5", "0", "inf").
std::string format_number(double x);
double parse_number(std::string_view text);

/// Comma-separated decimals, e.g. "0,22.5,45".
std::vector<double> parse_number_list(std::string_view text);
IntensityVector parse_intensity_vector(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Codebook documents:
//   {"angles": [...], "filters": [...], "photons_per_filter": N,
//    "vectors": [[...], ...]}
std::string codebook_to_json(const StoredCodebook& codebook);
StoredCodebook codebook_from_json(std::string_view text);

/// Header angle,filter_<phi>...,vector,collides_with. The last column names
/// the other angles sharing the row's vector, joined with ';'.
void write_codebook_csv(std::ostream& out, const StoredCodebook& codebook);

/// n,m,filters,N_per_filter,total,unique,margin,paper_filters,paper_total,agrees
/// Filter angles are joined with ';'. Missing values are empty; an absent
/// published claim prints agrees as "na".
inline constexpr std::string_view kDesignReportHeader =
    "n,m,filters,N_per_filter,total,unique,margin,paper_filters,paper_total,agrees";
std::string design_report_row(const DesignReport& r);
void write_design_reports_csv(std::ostream& out, const std::vector<DesignReport>& rows);
/// Inverse of design_report_row for the printed fields.
DesignReport parse_design_report_row(std::string_view line);
std::string design_reports_to_json(const std::vector<DesignReport>& rows);

/// scenario,bits_sent,bits_correct,bit_error_rate,mean_decode_margin,
/// eve_decode_accuracy,mean_intensity_0,...
std::string trial_report_header(std::size_t filters);
std::string trial_report_row(std::string_view scenario, const TrialReport& r);
TrialReport parse_trial_report_row(std::string_view line, std::string* scenario = nullptr);

inline constexpr std::string_view kDetectionHeader = "z_statistic,margin_difference";
std::string detection_row(const DetectionStatistic& s);

std::string simulation_to_json(const TrialReport& baseline, const TrialReport& attack,
                               const DetectionStatistic& s);

std::string decode_to_json(const DecodeResult& r);

}  // namespace polartomo::io
