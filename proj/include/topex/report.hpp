#pragma once

#include "topex/compare.hpp"
#include "topex/lda.hpp"
#include "topex/lexicon.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace topex {

enum class ReportFormat { kJson, kCsv, kSvg, kText };

ReportFormat parse_report_format(std::string_view text);
std::string_view extension(ReportFormat format);

/// Words drawn in each topic's cloud, keyed by topic label, with the
/// membership weight that sets their size.
using TopicClouds = std::map<std::string, std::vector<std::pair<std::string, double>>>;

/// Top words of every topic by P(w | topic).
TopicClouds clouds_from_model(const TopicModel& model, std::size_t words_per_topic = 15);

/// Patterns of every category, weighted 1 / (number of categories the
/// pattern belongs to). Prefix patterns are drawn with their '*'.
TopicClouds clouds_from_lexicon(const Lexicon& lexicon, std::size_t words_per_topic = 15);

std::string report_to_json(const ComparisonReport& report);
ComparisonReport report_from_json(std::string_view text);

/// Section-tagged rows "section,rank,topic,value_a,value_b,delta" for the
/// four ranked sections.
std::string report_to_csv(const ComparisonReport& report);

/// Signed bar chart of delta (positive bars class "bar pos", negative
/// "bar neg") plus word clouds for the ranked topics when clouds are given.
std::string report_to_svg(const ComparisonReport& report, const TopicClouds* clouds);

std::string report_to_text(const ComparisonReport& report);

/// Writes report.<ext> for each format into out_dir (created if missing).
/// Returns the written paths. Throws IoError.
std::vector<std::filesystem::path> render_report(const ComparisonReport& report,
                                                 const std::optional<TopicClouds>& clouds,
                                                 const std::set<ReportFormat>& formats,
                                                 const std::filesystem::path& out_dir);

}  // namespace topex
