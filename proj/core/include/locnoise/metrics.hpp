#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locnoise/attacks.hpp"
#include "locnoise/mask.hpp"
#include "locnoise/tensor.hpp"

namespace locnoise {

/// PSNR reported for identical images.
inline constexpr double kPsnrCapDb = 100.0;

struct MetricSet {
  double mpv = 0.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  double dr = 0.0;
};

/// sum(|N|) / (H * W * C), over the whole tensor.
double mean_pixel_value(const Tensor& noise);

/// 10 log10(1 / MSE) for images in [0, 1]; capped at kPsnrCapDb.
double psnr(const Tensor& x, const Tensor& x_adv);

/// Whole-image SSIM per channel (L = 1, C1 = 0.01^2, C2 = 0.03^2), averaged over channels.
double ssim(const Tensor& x, const Tensor& x_adv);

/// max - min of the noise over the active pixels of `mask`.
double dynamic_range(const Tensor& noise, const Mask& mask);

double attack_success_rate(std::span<const AttackOutcome> outcomes);
double attack_success_rate(std::span<const bool> successes);

/// 100 * (value - baseline) / baseline. Throws UndefinedChangeError on a zero baseline.
double relative_change(double baseline, double value);

MetricSet measure(const Tensor& x, const AttackOutcome& outcome, const Mask& mask);

/// One attack attempt as seen by the aggregation.
struct ImageResult {
  Method method = Method::kPgd;
  double gamma = 1.0;
  std::string image;
  bool success = false;
  std::size_t iterations = 0;
  MetricSet metrics;
};

/// One (method, gamma) line of the report. Averages of the imperceptibility
/// metrics and of iterations cover successful attempts only; they are empty
/// when nothing succeeded. Change columns compare against the same method's
/// gamma = 1 row and are empty when that baseline is missing or zero.
struct ReportRow {
  Method method = Method::kPgd;
  double gamma = 1.0;
  double asr = 0.0;
  std::optional<double> avg_mpv;
  std::optional<double> avg_psnr_db;
  std::optional<double> avg_ssim;
  std::optional<double> avg_dr;
  std::optional<double> avg_iters;
  std::optional<double> mpv_change_pct;
  std::optional<double> psnr_change_pct;
  std::optional<double> ssim_change_pct;
  std::optional<double> dr_change_pct;
  std::optional<double> iters_change_pct;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// One row per (method, gamma) in the given order. Results are summed in
/// image-name order so the input order never changes a reported value.
std::vector<ReportRow> aggregate(std::span<const ImageResult> results,
                                 std::span<const Method> methods, std::span<const double> gammas);

}  // namespace locnoise
