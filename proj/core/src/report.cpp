#include "locnoise/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "locnoise/errors.hpp"

namespace locnoise {

namespace {

std::string cell(const std::optional<double>& v) {
  return v ? fmt::format("{:.6f}", *v) : std::string();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<double> parse_cell(std::string_view text, std::size_t line_no) {
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw FormatError(fmt::format("report line {}: bad number '{}'", line_no, text));
  }
  return v;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string format_report(std::span<const ReportRow> rows) {
  std::string text(kReportHeader);
  text += '\n';
  for (const ReportRow& r : rows) {
    text += fmt::format("{},{:.6f},{:.6f},{},{},{},{},{},{},{},{},{},{}\n", to_string(r.method),
                        r.gamma, r.asr, cell(r.avg_mpv), cell(r.avg_psnr_db), cell(r.avg_ssim),
                        cell(r.avg_dr), cell(r.avg_iters), cell(r.mpv_change_pct),
                        cell(r.psnr_change_pct), cell(r.ssim_change_pct), cell(r.dr_change_pct),
                        cell(r.iters_change_pct));
  }
  return text;
}

void write_report(std::span<const ReportRow> rows, const std::filesystem::path& path) {
  if (rows.empty()) throw ArgumentError("refusing to write an empty report");
  write_text(format_report(rows), path);
}

std::vector<ReportRow> parse_report(std::string_view text) {
  std::vector<ReportRow> rows;
  const auto lines = split(text, '\n');
  if (lines.empty() || lines.front() != kReportHeader) {
    throw FormatError("report does not start with the expected header");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13) {
      throw FormatError(fmt::format("report line {}: expected 13 fields, got {}", i + 1, f.size()));
    }
    ReportRow r;
    const auto method = parse_method(f[0]);
    if (!method) throw FormatError(fmt::format("report line {}: unknown method '{}'", i + 1, f[0]));
    r.method = *method;
    const auto gamma = parse_cell(f[1], i + 1);
    const auto asr = parse_cell(f[2], i + 1);
    if (!gamma || !asr) throw FormatError(fmt::format("report line {}: missing gamma or asr", i + 1));
    r.gamma = *gamma;
    r.asr = *asr;
    r.avg_mpv = parse_cell(f[3], i + 1);
    r.avg_psnr_db = parse_cell(f[4], i + 1);
    r.avg_ssim = parse_cell(f[5], i + 1);
    r.avg_dr = parse_cell(f[6], i + 1);
    r.avg_iters = parse_cell(f[7], i + 1);
    r.mpv_change_pct = parse_cell(f[8], i + 1);
    r.psnr_change_pct = parse_cell(f[9], i + 1);
    r.ssim_change_pct = parse_cell(f[10], i + 1);
    r.dr_change_pct = parse_cell(f[11], i + 1);
    r.iters_change_pct = parse_cell(f[12], i + 1);
    rows.push_back(r);
  }
  return rows;
}

std::vector<ReportRow> read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_report(buffer.str());
}

void write_details(std::span<const DetailRow> rows, const std::filesystem::path& path) {
  std::string text(kDetailHeader);
  text += '\n';
  for (const DetailRow& d : rows) {
    const ImageResult& r = d.result;
    text += fmt::format("{},{:.6f},{},{},{},{},{:.6f},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n",
                        to_string(r.method), r.gamma, r.image, r.success ? 1 : 0, r.iterations,
                        d.clean_label, d.clean_confidence, d.adv_label, d.adv_confidence,
                        r.metrics.mpv, r.metrics.psnr_db, r.metrics.ssim, r.metrics.dr);
  }
  write_text(text, path);
}

}  // namespace locnoise
