#include "topex/report.hpp"

#include "topex/error.hpp"
#include "topex/fileio.hpp"
#include "topex/log.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace topex {

using nlohmann::json;

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::kJson;
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "svg") return ReportFormat::kSvg;
  if (text == "text" || text == "txt") return ReportFormat::kText;
  throw ValidationError("unknown report format \"" + std::string(text) + "\"");
}

std::string_view extension(ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: return "json";
    case ReportFormat::kCsv: return "csv";
    case ReportFormat::kSvg: return "svg";
    case ReportFormat::kText: return "txt";
  }
  return "";
}

TopicClouds clouds_from_model(const TopicModel& model, std::size_t words_per_topic) {
  TopicClouds clouds;
  for (std::size_t t = 0; t < model.num_topics(); ++t) {
    auto& words = clouds[model.labels()[t]];
    for (const auto& [w, p] : model.top_words(t, words_per_topic)) words.emplace_back(w.str(), p);
  }
  return clouds;
}

TopicClouds clouds_from_lexicon(const Lexicon& lexicon, std::size_t words_per_topic) {
  TopicClouds clouds;
  for (const auto& name : lexicon.categories()) clouds[name];
  for (const auto& e : lexicon.entries()) {
    const double weight = 1.0 / static_cast<double>(e.categories.size());
    for (auto c : e.categories) {
      auto& words = clouds[lexicon.categories()[c]];
      if (words.size() < words_per_topic) {
        words.emplace_back(e.prefix ? e.pattern + "*" : e.pattern, weight);
      }
    }
  }
  return clouds;
}

namespace {

json ranked_to_json(const std::vector<RankedTopic>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"rank", r.rank}, {"topic", r.topic}, {"value_a", r.value_a},
                   {"value_b", r.value_b}, {"delta", r.delta}});
  }
  return out;
}

std::vector<RankedTopic> ranked_from_json(const json& rows) {
  std::vector<RankedTopic> out;
  for (const auto& r : rows) {
    out.push_back({r.at("rank").get<std::size_t>(), r.at("topic").get<std::string>(),
                   r.at("value_a").get<double>(), r.at("value_b").get<double>(),
                   r.at("delta").get<double>()});
  }
  return out;
}

}  // namespace

std::string report_to_json(const ComparisonReport& report) {
  json delta = json::object();
  for (std::size_t t = 0; t < report.topic_labels.size(); ++t) {
    delta[report.topic_labels[t]] = report.delta[t];
  }
  json doc = {
      {"models", {report.model_a, report.model_b}},
      {"k", report.k},
      {"path", report.path},
      {"membership_source", report.membership_source},
      {"other_excluded", report.other_excluded},
      {"distance_l1", report.distance_l1},
      {"topic_labels", report.topic_labels},
      {"normalized", {{"a", report.normalized_a}, {"b", report.normalized_b}}},
      {"delta", std::move(delta)},
      {"most_different", ranked_to_json(report.most_different)},
      {"most_similar", ranked_to_json(report.most_similar)},
      {"per_model",
       {{"a",
         {{"model_id", report.model_a},
          {"most_important", ranked_to_json(report.most_important_a)},
          {"least_important", ranked_to_json(report.least_important_a)}}},
        {"b",
         {{"model_id", report.model_b},
          {"most_important", ranked_to_json(report.most_important_b)},
          {"least_important", ranked_to_json(report.least_important_b)}}}}},
  };
  return doc.dump(2) + "\n";
}

ComparisonReport report_from_json(std::string_view text) {
  try {
    json doc = json::parse(text);
    ComparisonReport r;
    r.model_a = doc.at("models").at(0).get<std::string>();
    r.model_b = doc.at("models").at(1).get<std::string>();
    r.k = doc.at("k").get<std::size_t>();
    r.path = doc.at("path").get<std::string>();
    r.membership_source = doc.at("membership_source").get<std::string>();
    r.other_excluded = doc.at("other_excluded").get<bool>();
    r.distance_l1 = doc.at("distance_l1").get<double>();
    r.topic_labels = doc.at("topic_labels").get<std::vector<std::string>>();
    r.normalized_a = doc.at("normalized").at("a").get<std::vector<double>>();
    r.normalized_b = doc.at("normalized").at("b").get<std::vector<double>>();
    for (const auto& label : r.topic_labels) r.delta.push_back(doc.at("delta").at(label).get<double>());
    r.most_different = ranked_from_json(doc.at("most_different"));
    r.most_similar = ranked_from_json(doc.at("most_similar"));
    const json& pm = doc.at("per_model");
    r.most_important_a = ranked_from_json(pm.at("a").at("most_important"));
    r.least_important_a = ranked_from_json(pm.at("a").at("least_important"));
    r.most_important_b = ranked_from_json(pm.at("b").at("most_important"));
    r.least_important_b = ranked_from_json(pm.at("b").at("least_important"));
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid report document: ") + e.what());
  }
}

std::string report_to_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "section,rank,topic,value_a,value_b,delta\n";
  auto section = [&](std::string_view name, const std::vector<RankedTopic>& rows) {
    for (const auto& r : rows) {
      out << name << ',' << r.rank << ',' << csv_field(r.topic) << ',' << format_double(r.value_a)
          << ',' << format_double(r.value_b) << ',' << format_double(r.delta) << '\n';
    }
  };
  section("most_important_a", report.most_important_a);
  section("most_important_b", report.most_important_b);
  section("most_different", report.most_different);
  section("most_similar", report.most_similar);
  return out.str();
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string fixed(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace

std::string report_to_svg(const ComparisonReport& report, const TopicClouds* clouds) {
  constexpr double kWidth = 760.0;
  constexpr double kLabelWidth = 170.0;
  constexpr double kRow = 22.0;
  constexpr double kTop = 50.0;
  const double axis = kLabelWidth + (kWidth - kLabelWidth - 80.0) / 2.0;
  const double half = (kWidth - kLabelWidth - 80.0) / 2.0 - 10.0;

  double max_abs = 0.0;
  for (double d : report.delta) max_abs = std::max(max_abs, std::abs(d));
  const double scale = max_abs > 0.0 ? half / max_abs : 0.0;

  std::ostringstream body;
  const double chart_bottom = kTop + kRow * static_cast<double>(report.delta.size());
  body << "<text x=\"10\" y=\"24\" class=\"title\">Topic importance difference "
       << xml_escape(report.model_a) << " - " << xml_escape(report.model_b)
       << " (L1 distance " << fixed(report.distance_l1, 4) << ")</text>\n";
  body << "<line x1=\"" << axis << "\" y1=\"" << kTop - 6 << "\" x2=\"" << axis << "\" y2=\""
       << chart_bottom << "\" class=\"axis\"/>\n";
  for (std::size_t t = 0; t < report.delta.size(); ++t) {
    const double d = report.delta[t];
    const double y = kTop + kRow * static_cast<double>(t);
    body << "<text x=\"" << kLabelWidth - 8 << "\" y=\"" << y + 14
         << "\" class=\"label\" text-anchor=\"end\">" << xml_escape(report.topic_labels[t]) << "</text>\n";
    if (d != 0.0) {
      const double w = std::abs(d) * scale;
      const double x = d > 0.0 ? axis : axis - w;
      body << "<rect class=\"bar " << (d > 0.0 ? "pos" : "neg") << "\" x=\"" << fixed(x, 2)
           << "\" y=\"" << y + 3 << "\" width=\"" << fixed(w, 2) << "\" height=\"" << kRow - 6
           << "\"/>\n";
    }
    body << "<text x=\"" << kWidth - 10 << "\" y=\"" << y + 14
         << "\" class=\"value\" text-anchor=\"end\">" << fixed(d, 5) << "</text>\n";
  }

  double y = chart_bottom + 30.0;
  if (clouds != nullptr) {
    std::vector<const RankedTopic*> shown;
    for (const auto* rows : {&report.most_different, &report.most_similar}) {
      for (const auto& r : *rows) {
        bool seen = std::any_of(shown.begin(), shown.end(), [&](const RankedTopic* s) { return s->topic == r.topic; });
        if (!seen) shown.push_back(&r);
      }
    }
    for (const auto* r : shown) {
      auto it = clouds->find(r->topic);
      if (it == clouds->end() || it->second.empty()) continue;
      body << "<text x=\"10\" y=\"" << y << "\" class=\"cloud-title " << (r->delta >= 0.0 ? "pos" : "neg")
           << "\">" << xml_escape(r->topic) << " (delta " << fixed(r->delta, 5) << ")</text>\n";
      y += 8.0;
      double max_w = 0.0;
      for (const auto& [_, w] : it->second) max_w = std::max(max_w, w);
      double x = 10.0;
      double line_height = 0.0;
      double line_y = y;
      for (const auto& [word, w] : it->second) {
        const double size = 10.0 + 22.0 * (max_w > 0.0 ? w / max_w : 0.0);
        const double width = 0.6 * size * static_cast<double>(utf8_length(word)) + 12.0;
        if (x + width > kWidth - 10.0 && x > 10.0) {
          x = 10.0;
          line_y += line_height + 4.0;
          line_height = 0.0;
        }
        line_height = std::max(line_height, size);
        body << "<text class=\"cloud-word\" x=\"" << fixed(x, 1) << "\" y=\"" << fixed(line_y + size, 1)
             << "\" font-size=\"" << fixed(size, 1) << "\">" << xml_escape(word) << "</text>\n";
        x += width;
      }
      y = line_y + line_height + 34.0;
    }
  }

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << fixed(y + 10.0, 0) << "\" viewBox=\"0 0 " << kWidth << ' ' << fixed(y + 10.0, 0) << "\">\n"
      << "<style>\n"
      << "text { font-family: sans-serif; font-size: 12px; fill: #222; }\n"
      << ".title { font-size: 15px; font-weight: bold; }\n"
      << ".axis { stroke: #444; stroke-width: 1; }\n"
      << ".bar.pos { fill: #1f5fbf; }\n"
      << ".bar.neg { fill: #c8322b; }\n"
      << ".cloud-title { font-size: 13px; font-weight: bold; }\n"
      << ".cloud-title.pos { fill: #1f5fbf; }\n"
      << ".cloud-title.neg { fill: #c8322b; }\n"
      << "</style>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body.str() << "</svg>\n";
  return svg.str();
}

std::string report_to_text(const ComparisonReport& report) {
  std::size_t label_width = 5;
  for (const auto& l : report.topic_labels) label_width = std::max(label_width, utf8_length(l));
  std::ostringstream out;
  out << "Comparison " << report.model_a << " vs " << report.model_b << " (" << report.path << ", "
      << report.membership_source << ", k=" << report.k << ")\n";
  out << "L1 distance: " << fixed(report.distance_l1, 6) << "\n";

  auto pad = [&](const std::string& s) {
    std::size_t n = utf8_length(s);
    return s + std::string(label_width > n ? label_width - n : 0, ' ');
  };
  auto table = [&](std::string_view title, const std::vector<RankedTopic>& rows) {
    out << "\n" << title << "\n";
    out << "  rank  " << pad("topic") << "  " << std::setw(12) << "value_a" << "  " << std::setw(12)
        << "value_b" << "  " << std::setw(12) << "delta" << "\n";
    for (const auto& r : rows) {
      out << "  " << std::setw(4) << r.rank << "  " << pad(r.topic) << "  " << std::setw(12)
          << fixed(r.value_a, 6) << "  " << std::setw(12) << fixed(r.value_b, 6) << "  "
          << std::setw(12) << fixed(r.delta, 6) << "\n";
    }
  };
  table("Most important for " + report.model_a, report.most_important_a);
  table("Least important for " + report.model_a, report.least_important_a);
  table("Most important for " + report.model_b, report.most_important_b);
  table("Least important for " + report.model_b, report.least_important_b);
  table("Most different (max |delta|)", report.most_different);
  table("Most similar (min |delta|)", report.most_similar);
  return out.str();
}

std::vector<std::filesystem::path> render_report(const ComparisonReport& report,
                                                 const std::optional<TopicClouds>& clouds,
                                                 const std::set<ReportFormat>& formats,
                                                 const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError("cannot create output directory " + out_dir.string());
  }
  std::vector<std::filesystem::path> written;
  for (auto format : formats) {
    std::string content;
    switch (format) {
      case ReportFormat::kJson: content = report_to_json(report); break;
      case ReportFormat::kCsv: content = report_to_csv(report); break;
      case ReportFormat::kText: content = report_to_text(report); break;
      case ReportFormat::kSvg:
        if (!clouds) log::warn("no topic model or lexicon given; SVG word clouds skipped");
        content = report_to_svg(report, clouds ? &*clouds : nullptr);
        break;
    }
    auto path = out_dir / ("report." + std::string(extension(format)));
    write_file_atomic(path, content);
    written.push_back(path);
  }
  return written;
}

}  // namespace topex
