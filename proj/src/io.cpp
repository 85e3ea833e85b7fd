#include "polartomo/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "json.hpp"

namespace polartomo::io {

using nlohmann::json;

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

long parse_integer(std::string_view text) {
  text = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("not an integer: '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ParseError("not a boolean: '" + std::string(text) + "'");
}

std::string bank_text(const FilterBank& bank) {
  std::vector<std::string> parts;
  for (Angle a : bank) parts.push_back(format_number(a.value()));
  return join(parts, ";");
}

std::string vector_text(const IntensityVector& v) {
  std::vector<std::string> parts;
  for (int c : v) parts.push_back(std::to_string(c));
  return "(" + join(parts, ",") + ")";
}

json number_or_null(double x) {
  return std::isfinite(x) ? json(x) : json(nullptr);
}

json report_json(const TrialReport& r) {
  return {{"bits_sent", r.bits_sent},
          {"bits_correct", r.bits_correct},
          {"bit_error_rate", r.bit_error_rate},
          {"mean_decode_margin", number_or_null(r.mean_decode_margin)},
          {"eve_decode_accuracy", r.eve_decode_accuracy},
          {"mean_intensity", r.mean_intensity}};
}

}  // namespace

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

double parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_number(part));
  return out;
}

IntensityVector parse_intensity_vector(std::string_view text) {
  IntensityVector v;
  for (auto part : split(text, ',')) {
    const long c = parse_integer(part);
    if (c < 0 || c > std::numeric_limits<int>::max()) {
      throw ParseError("intensity component out of range: " + std::string(part));
    }
    v.push_back(static_cast<int>(c));
  }
  return v;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

std::string codebook_to_json(const StoredCodebook& codebook) {
  json doc;
  doc["angles"] = json::array();
  doc["vectors"] = json::array();
  for (const auto& e : codebook.entries()) {
    doc["angles"].push_back(e.angle.value());
    doc["vectors"].push_back(e.vector);
  }
  doc["filters"] = json::array();
  for (Angle a : codebook.bank()) doc["filters"].push_back(a.value());
  doc["photons_per_filter"] = codebook.budget().per_filter();
  return doc.dump(2) + "\n";
}

StoredCodebook codebook_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    std::vector<Angle> filters;
    for (const auto& f : doc.at("filters")) filters.push_back(Angle::degrees(f.get<double>()));
    const auto& angles = doc.at("angles");
    const auto& vectors = doc.at("vectors");
    if (!angles.is_array() || !vectors.is_array() || angles.size() != vectors.size()) {
      throw ParseError("codebook needs equally long 'angles' and 'vectors' arrays");
    }
    std::vector<CodebookEntry> entries;
    for (std::size_t k = 0; k < angles.size(); ++k) {
      IntensityVector v;
      for (const auto& c : vectors[k]) {
        const int count = c.get<int>();
        if (count < 0) throw ParseError("negative intensity in codebook");
        v.push_back(count);
      }
      entries.push_back({Angle::degrees(angles[k].get<double>()), std::move(v)});
    }
    return StoredCodebook(FilterBank(std::move(filters)),
                          PhotonBudget(doc.at("photons_per_filter").get<int>()),
                          std::move(entries));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed codebook document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid codebook: ") + e.what());
  }
}

void write_codebook_csv(std::ostream& out, const StoredCodebook& codebook) {
  out << "angle";
  for (Angle a : codebook.bank()) out << ",filter_" << format_number(a.value());
  out << ",vector,collides_with\n";
  for (const auto& e : codebook.entries()) {
    out << format_number(e.angle.value());
    for (int c : e.vector) out << ',' << c;
    out << ",\"" << vector_text(e.vector) << "\",";
    std::vector<std::string> others;
    for (const auto& o : codebook.entries()) {
      if (o.angle != e.angle && o.vector == e.vector) {
        others.push_back(format_number(o.angle.value()));
      }
    }
    out << join(others, ";") << '\n';
  }
}

std::string design_report_row(const DesignReport& r) {
  std::vector<std::string> f;
  f.push_back(std::to_string(r.n));
  f.push_back(std::to_string(r.m));
  f.push_back(r.filters_found ? bank_text(*r.filters_found) : "");
  f.push_back(r.photons_per_filter ? std::to_string(*r.photons_per_filter) : "");
  f.push_back(std::to_string(r.total_photons));
  f.push_back(r.unique ? "true" : "false");
  f.push_back(format_number(r.margin));
  f.push_back(std::to_string(r.paper_claim_filters));
  f.push_back(std::to_string(r.paper_claim_total_photons));
  f.push_back(!r.agrees_with_paper ? "na" : (*r.agrees_with_paper ? "true" : "false"));
  return join(f, ",");
}

void write_design_reports_csv(std::ostream& out, const std::vector<DesignReport>& rows) {
  out << kDesignReportHeader << '\n';
  for (const auto& r : rows) out << design_report_row(r) << '\n';
}

DesignReport parse_design_report_row(std::string_view line) {
  const auto f = split(trim(line), ',');
  if (f.size() != 10) {
    throw ParseError("design report row needs 10 fields, got " + std::to_string(f.size()));
  }
  DesignReport r;
  r.n = static_cast<std::size_t>(parse_integer(f[0]));
  r.m = static_cast<int>(parse_integer(f[1]));
  if (!f[2].empty()) {
    std::vector<Angle> bank;
    for (auto a : split(f[2], ';')) bank.push_back(Angle::degrees(parse_number(a)));
    r.filters_found = FilterBank(std::move(bank));
  }
  if (!f[3].empty()) r.photons_per_filter = static_cast<int>(parse_integer(f[3]));
  r.total_photons = static_cast<int>(parse_integer(f[4]));
  r.unique = parse_bool(f[5]);
  r.margin = parse_number(f[6]);
  r.paper_claim_filters = static_cast<int>(parse_integer(f[7]));
  r.paper_claim_total_photons = static_cast<int>(parse_integer(f[8]));
  if (f[9] != "na") r.agrees_with_paper = parse_bool(f[9]);
  return r;
}

std::string design_reports_to_json(const std::vector<DesignReport>& rows) {
  json doc = json::array();
  for (const auto& r : rows) {
    json j;
    j["n"] = r.n;
    j["m"] = r.m;
    j["budget_cap"] = r.budget_cap;
    j["filters"] = json::array();
    if (r.filters_found) {
      for (Angle a : *r.filters_found) j["filters"].push_back(a.value());
    }
    j["N_per_filter"] = r.photons_per_filter ? json(*r.photons_per_filter) : json(nullptr);
    j["total"] = r.total_photons;
    j["unique"] = r.unique;
    j["margin"] = number_or_null(r.margin);
    j["paper_filters"] = r.paper_claim_filters;
    j["paper_total"] = r.paper_claim_total_photons;
    j["agrees"] = r.agrees_with_paper ? json(*r.agrees_with_paper) : json(nullptr);
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string trial_report_header(std::size_t filters) {
  std::string h =
      "scenario,bits_sent,bits_correct,bit_error_rate,mean_decode_margin,"
      "eve_decode_accuracy";
  for (std::size_t j = 0; j < filters; ++j) h += ",mean_intensity_" + std::to_string(j);
  return h;
}

std::string trial_report_row(std::string_view scenario, const TrialReport& r) {
  std::vector<std::string> f{std::string(scenario),
                             std::to_string(r.bits_sent),
                             std::to_string(r.bits_correct),
                             format_number(r.bit_error_rate),
                             format_number(r.mean_decode_margin),
                             format_number(r.eve_decode_accuracy)};
  for (double m : r.mean_intensity) f.push_back(format_number(m));
  return join(f, ",");
}

TrialReport parse_trial_report_row(std::string_view line, std::string* scenario) {
  const auto f = split(trim(line), ',');
  if (f.size() < 6) throw ParseError("trial report row needs at least 6 fields");
  if (scenario) *scenario = std::string(f[0]);
  TrialReport r;
  r.bits_sent = static_cast<std::size_t>(parse_integer(f[1]));
  r.bits_correct = static_cast<std::size_t>(parse_integer(f[2]));
  r.bit_error_rate = parse_number(f[3]);
  r.mean_decode_margin = parse_number(f[4]);
  r.eve_decode_accuracy = parse_number(f[5]);
  for (std::size_t j = 6; j < f.size(); ++j) r.mean_intensity.push_back(parse_number(f[j]));
  return r;
}

std::string detection_row(const DetectionStatistic& s) {
  return format_number(s.z) + "," + format_number(s.margin_difference);
}

std::string simulation_to_json(const TrialReport& baseline, const TrialReport& attack,
                               const DetectionStatistic& s) {
  json doc;
  doc["baseline"] = report_json(baseline);
  doc["attack"] = report_json(attack);
  doc["detection"] = {{"z_statistic", s.z},
                      {"margin_difference", number_or_null(s.margin_difference)}};
  return doc.dump(2) + "\n";
}

std::string decode_to_json(const DecodeResult& r) {
  json doc{{"angle", r.angle.value()},
           {"distance", r.distance},
           {"exact", r.exact},
           {"margin", number_or_null(r.margin)}};
  return doc.dump(2) + "\n";
}

}  // namespace polartomo::io
