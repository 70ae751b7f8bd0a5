#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "locnoise/metrics.hpp"

namespace locnoise {

inline constexpr std::string_view kReportHeader =
    "method,gamma,asr,avg_mpv,avg_psnr_db,avg_ssim,avg_dr,avg_iters,"
    "mpv_change_pct,psnr_change_pct,ssim_change_pct,dr_change_pct,iters_change_pct";

inline constexpr std::string_view kDetailHeader =
    "method,gamma,image,success,iterations,clean_label,clean_confidence,adv_label,"
    "adv_confidence,mpv,psnr_db,ssim,dr";

/// Report CSV text: fixed six-decimal floats, empty cells for undefined values.
std::string format_report(std::span<const ReportRow> rows);

/// Throws ArgumentError for an empty row list and IoError when the file
/// cannot be written.
void write_report(std::span<const ReportRow> rows, const std::filesystem::path& path);

/// Parses CSV text produced by format_report. Throws FormatError.
std::vector<ReportRow> parse_report(std::string_view text);
std::vector<ReportRow> read_report(const std::filesystem::path& path);

/// Extra per-attempt fields kept for the detail CSV.
struct DetailRow {
  ImageResult result;
  std::size_t clean_label = 0;
  double clean_confidence = 0.0;
  std::size_t adv_label = 0;
  double adv_confidence = 0.0;
};

void write_details(std::span<const DetailRow> rows, const std::filesystem::path& path);

}  // namespace locnoise
