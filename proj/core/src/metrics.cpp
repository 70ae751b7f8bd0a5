#include "locnoise/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "locnoise/errors.hpp"

namespace locnoise {

namespace {

void check_same_shape(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ArgumentError(fmt::format("shape mismatch: {} vs {}", to_string(a.shape()),
                                    to_string(b.shape())));
  }
}

constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;

// Exact float equality is intended: gamma values come from the same list.
bool is_baseline(double gamma) { return gamma == 1.0; }

}  // namespace

double mean_pixel_value(const Tensor& noise) {
  if (noise.empty()) return 0.0;
  double acc = 0.0;
  for (float v : noise.data()) acc += std::fabs(static_cast<double>(v));
  return acc / static_cast<double>(noise.size());
}

double psnr(const Tensor& x, const Tensor& x_adv) {
  check_same_shape(x, x_adv);
  if (x.empty()) throw ArgumentError("psnr of empty images");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - static_cast<double>(x_adv[i]);
    acc += d * d;
  }
  const double mse = acc / static_cast<double>(x.size());
  if (mse == 0.0) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / mse));
}

double ssim(const Tensor& x, const Tensor& x_adv) {
  check_same_shape(x, x_adv);
  if (x.empty()) throw ArgumentError("ssim of empty images");
  const std::size_t channels = x.shape().channels;
  const double n = static_cast<double>(x.shape().pixels());
  double total = 0.0;
  for (std::size_t c = 0; c < channels; ++c) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = c; i < x.size(); i += channels) {
      mx += x[i];
      my += x_adv[i];
    }
    mx /= n;
    my /= n;
    double vx = 0.0, vy = 0.0, cov = 0.0;
    for (std::size_t i = c; i < x.size(); i += channels) {
      const double dx = x[i] - mx, dy = x_adv[i] - my;
      vx += dx * dx;
      vy += dy * dy;
      cov += dx * dy;
    }
    vx /= n;
    vy /= n;
    cov /= n;
    total += ((2.0 * mx * my + kSsimC1) * (2.0 * cov + kSsimC2)) /
             ((mx * mx + my * my + kSsimC1) * (vx + vy + kSsimC2));
  }
  return std::clamp(total / static_cast<double>(channels), -1.0, 1.0);
}

double dynamic_range(const Tensor& noise, const Mask& mask) {
  const Shape& s = noise.shape();
  if (s.height != mask.height() || s.width != mask.width()) {
    throw ArgumentError("noise does not match the mask");
  }
  if (mask.active_count() == 0 || s.channels == 0) throw ArgumentError("mask has no active pixels");
  float lo = std::numeric_limits<float>::max();
  float hi = std::numeric_limits<float>::lowest();
  const auto bits = mask.bits();
  for (std::size_t p = 0; p < bits.size(); ++p) {
    if (!bits[p]) continue;
    for (std::size_t c = 0; c < s.channels; ++c) {
      const float v = noise[p * s.channels + c];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return static_cast<double>(hi) - static_cast<double>(lo);
}

double attack_success_rate(std::span<const bool> successes) {
  if (successes.empty()) throw ArgumentError("success rate of an empty outcome list");
  const auto hits = std::count(successes.begin(), successes.end(), true);
  return static_cast<double>(hits) / static_cast<double>(successes.size());
}

double attack_success_rate(std::span<const AttackOutcome> outcomes) {
  if (outcomes.empty()) throw ArgumentError("success rate of an empty outcome list");
  std::size_t hits = 0;
  for (const auto& o : outcomes) hits += o.success ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

double relative_change(double baseline, double value) {
  if (baseline == 0.0) throw UndefinedChangeError("relative change against a zero baseline");
  return 100.0 * (value - baseline) / baseline;
}

MetricSet measure(const Tensor& x, const AttackOutcome& outcome, const Mask& mask) {
  MetricSet m;
  m.mpv = mean_pixel_value(outcome.noise);
  m.psnr_db = psnr(x, outcome.adversarial_image);
  m.ssim = ssim(x, outcome.adversarial_image);
  m.dr = dynamic_range(outcome.noise, mask);
  return m;
}

std::vector<ReportRow> aggregate(std::span<const ImageResult> results,
                                 std::span<const Method> methods, std::span<const double> gammas) {
  std::vector<ReportRow> rows;
  for (Method method : methods) {
    const std::size_t first = rows.size();
    for (double gamma : gammas) {
      std::vector<const ImageResult*> group;
      for (const auto& r : results) {
        if (r.method == method && r.gamma == gamma) group.push_back(&r);
      }
      if (group.empty()) continue;
      std::sort(group.begin(), group.end(),
                [](const ImageResult* a, const ImageResult* b) { return a->image < b->image; });

      ReportRow row;
      row.method = method;
      row.gamma = gamma;
      std::size_t hits = 0;
      MetricSet sum;
      double iters = 0.0;
      for (const ImageResult* r : group) {
        if (!r->success) continue;
        ++hits;
        sum.mpv += r->metrics.mpv;
        sum.psnr_db += r->metrics.psnr_db;
        sum.ssim += r->metrics.ssim;
        sum.dr += r->metrics.dr;
        iters += static_cast<double>(r->iterations);
      }
      row.asr = static_cast<double>(hits) / static_cast<double>(group.size());
      if (hits > 0) {
        const double k = static_cast<double>(hits);
        row.avg_mpv = sum.mpv / k;
        row.avg_psnr_db = sum.psnr_db / k;
        row.avg_ssim = sum.ssim / k;
        row.avg_dr = sum.dr / k;
        if (method != Method::kFgsm) row.avg_iters = iters / k;
      }
      rows.push_back(row);
    }

    const auto base = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(first), rows.end(),
                                   [](const ReportRow& r) { return is_baseline(r.gamma); });
    if (base == rows.end()) continue;
    const ReportRow baseline = *base;
    auto change = [](const std::optional<double>& b, const std::optional<double>& v)
        -> std::optional<double> {
      if (!b || !v || *b == 0.0) return std::nullopt;
      return relative_change(*b, *v);
    };
    for (auto it = rows.begin() + static_cast<std::ptrdiff_t>(first); it != rows.end(); ++it) {
      it->mpv_change_pct = change(baseline.avg_mpv, it->avg_mpv);
      it->psnr_change_pct = change(baseline.avg_psnr_db, it->avg_psnr_db);
      it->ssim_change_pct = change(baseline.avg_ssim, it->avg_ssim);
      it->dr_change_pct = change(baseline.avg_dr, it->avg_dr);
      it->iters_change_pct = change(baseline.avg_iters, it->avg_iters);
    }
  }
  return rows;
}

}  // namespace locnoise
