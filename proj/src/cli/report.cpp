#include <charconv>
#include <cstdio>
#include <sstream>

#include "fftplan/cli.hpp"
#include "json.hpp"

namespace fftplan::cli {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

using ojson = nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string printf_string(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

ojson pass_json(const PassRow& p) {
  ojson j;
  j["label"] = p.label;
  j["stage"] = p.stage;
  j["span"] = p.span;
  j["stride"] = p.stride ? ojson(*p.stride) : ojson(nullptr);
  j["time_ns"] = p.time_ns;
  j["gflops"] = p.gflops;
  return j;
}

}  // namespace

std::string render_comparison(const PerfReport& report, OutputFormat format) {
  std::ostringstream out;
  switch (format) {
    case OutputFormat::text: {
      out << printf_string("%-34s %10s %8s %10s\n", "Algorithm", "Time (ns)", "GFLOPS", "% of best");
      for (const auto& r : report.rows) {
        out << printf_string("%-34s %10.0f %8.1f %9.0f%%\n", r.name.c_str(), r.time_ns, r.gflops,
                             r.percent_of_best);
      }
      break;
    }
    case OutputFormat::csv: {
      out << "name,time_ns,gflops,percent_of_best\n";
      for (const auto& r : report.rows) {
        out << csv_field(r.name) << ',' << format_number(r.time_ns) << ','
            << format_number(r.gflops) << ',' << format_number(r.percent_of_best) << '\n';
      }
      break;
    }
    case OutputFormat::json: {
      ojson doc;
      doc["n"] = report.n;
      auto rows = ojson::array();
      for (const auto& r : report.rows) {
        ojson j;
        j["name"] = r.name;
        j["arrangement"] = r.arrangement.to_string();
        j["time_ns"] = r.time_ns;
        j["gflops"] = r.gflops;
        j["percent_of_best"] = r.percent_of_best;
        j["predicted_ns"] = r.predicted_ns ? ojson(*r.predicted_ns) : ojson(nullptr);
        rows.push_back(std::move(j));
      }
      doc["rows"] = std::move(rows);
      auto passes = ojson::array();
      for (const auto& p : report.passes) passes.push_back(pass_json(p));
      doc["passes"] = std::move(passes);
      out << doc.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

std::string render_passes(const std::vector<PassRow>& passes, std::size_t n, OutputFormat format) {
  std::ostringstream out;
  switch (format) {
    case OutputFormat::text: {
      out << printf_string("%6s %8s %10s %8s\n", "Pass", "Stride", "Time (us)", "GFLOPS");
      for (const auto& p : passes) {
        const std::string stride = p.stride ? std::to_string(*p.stride) : "-";
        out << printf_string("%6s %8s %10.2f %8.1f\n", p.label.c_str(), stride.c_str(),
                             p.time_ns / 1000.0, p.gflops);
      }
      break;
    }
    case OutputFormat::csv: {
      out << "pass,stride,time_ns,gflops\n";
      for (const auto& p : passes) {
        out << p.label << ',' << (p.stride ? std::to_string(*p.stride) : "") << ','
            << format_number(p.time_ns) << ',' << format_number(p.gflops) << '\n';
      }
      break;
    }
    case OutputFormat::json: {
      ojson doc;
      doc["n"] = n;
      auto rows = ojson::array();
      for (const auto& p : passes) rows.push_back(pass_json(p));
      doc["passes"] = std::move(rows);
      out << doc.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

}  // namespace fftplan::cli
