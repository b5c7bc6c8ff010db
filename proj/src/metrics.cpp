#include "fusim/metrics.hpp"

#include <cmath>
#include <numeric>

#include "fusim/common.hpp"
#include "fusim/model.hpp"

namespace fusim::metrics {

namespace {

struct Moments {
    double mean_x = 0.0;
    double mean_y = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    double cov = 0.0;
};

// Population (biased) statistics over the full pixel set.
Moments moments(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    Moments m;
    for (double v : x) m.mean_x += v;
    for (double v : y) m.mean_y += v;
    m.mean_x /= n;
    m.mean_y /= n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - m.mean_x;
        const double dy = y[i] - m.mean_y;
        m.var_x += dx * dx;
        m.var_y += dy * dy;
        m.cov += dx * dy;
    }
    m.var_x /= n;
    m.var_y /= n;
    m.cov /= n;
    return m;
}

void check_pair(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw ShapeError("ssim inputs differ in length: " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
    }
    if (x.size() < 4) {
        throw ShapeError("ssim needs at least 4 values, got " + std::to_string(x.size()));
    }
}

}  // namespace

SsimConstants SsimConstants::make(double L, double k1, double k2) {
    SsimConstants k;
    k.c1 = (k1 * L) * (k1 * L);
    k.c2 = (k2 * L) * (k2 * L);
    k.c3 = k.c2 / 2.0;
    return k;
}

SsimComponents ssim_components(const std::vector<double>& x, const std::vector<double>& y,
                               const SsimConstants& k) {
    check_pair(x, y);
    const Moments m = moments(x, y);
    const double sx = std::sqrt(m.var_x);
    const double sy = std::sqrt(m.var_y);
    SsimComponents c;
    c.luminance = (2.0 * m.mean_x * m.mean_y + k.c1) / (m.mean_x * m.mean_x + m.mean_y * m.mean_y + k.c1);
    c.contrast = (2.0 * sx * sy + k.c2) / (m.var_x + m.var_y + k.c2);
    c.structure = (m.cov + k.c3) / (sx * sy + k.c3);
    return c;
}

double ssim(const std::vector<double>& x, const std::vector<double>& y, const SsimConstants& k) {
    check_pair(x, y);
    const bool unit_exponents = k.alpha == 1.0 && k.beta == 1.0 && k.gamma == 1.0;
    if (unit_exponents && k.c3 == k.c2 / 2.0) {
        const Moments m = moments(x, y);
        const double num = (2.0 * m.mean_x * m.mean_y + k.c1) * (2.0 * m.cov + k.c2);
        const double den = (m.mean_x * m.mean_x + m.mean_y * m.mean_y + k.c1) * (m.var_x + m.var_y + k.c2);
        return num / den;
    }
    const SsimComponents c = ssim_components(x, y, k);
    return std::pow(c.luminance, k.alpha) * std::pow(c.contrast, k.beta) *
           std::pow(c.structure, k.gamma);
}

double ssim_windowed(const std::vector<double>& x, const std::vector<double>& y, int width,
                     int height, const SsimConstants& k) {
    if (width < kSsimWindow || height < kSsimWindow) {
        throw ShapeError("windowed ssim needs images at least " + std::to_string(kSsimWindow) +
                         "x" + std::to_string(kSsimWindow));
    }
    const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (x.size() != expected || y.size() != expected) {
        throw ShapeError("windowed ssim image size mismatch");
    }
    std::vector<double> wx(static_cast<std::size_t>(kSsimWindow) * kSsimWindow);
    std::vector<double> wy(wx.size());
    double sum = 0.0;
    long count = 0;
    for (int r = 0; r + kSsimWindow <= height; ++r) {
        for (int c = 0; c + kSsimWindow <= width; ++c) {
            std::size_t o = 0;
            for (int dr = 0; dr < kSsimWindow; ++dr) {
                const std::size_t row = (static_cast<std::size_t>(r + dr) * width) + c;
                for (int dc = 0; dc < kSsimWindow; ++dc, ++o) {
                    wx[o] = x[row + dc];
                    wy[o] = y[row + dc];
                }
            }
            sum += ssim(wx, wy, k);
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

double mse(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty()) {
        throw ShapeError("mse inputs must be non-empty and equal length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sum += d * d;
    }
    return sum / static_cast<double>(x.size());
}

EvalReport evaluate_suite(const std::vector<const model::MlpModel*>& models,
                          const std::vector<io::Sample>& samples, const SsimConstants& k,
                          bool windowed) {
    if (models.empty()) throw ShapeError("evaluate_suite needs at least one model");
    if (samples.empty()) throw ShapeError("evaluate_suite needs at least one sample");
    EvalReport report;
    for (const model::MlpModel* m : models) {
        if (m == nullptr) throw ShapeError("evaluate_suite got a null model");
        EvalEntry entry;
        entry.mode = m->meta.mode;
        entry.ssim_values.reserve(samples.size());
        entry.mse_values.reserve(samples.size());
        for (const io::Sample& s : samples) {
            const std::vector<double> input = model::mask_for_mode(*m, s.fused);
            const std::vector<double> pred = model::forward(*m, input);
            std::vector<double> truth(s.truth.begin(), s.truth.end());
            const double sv = windowed
                                  ? ssim_windowed(pred, truth, m->meta.map_width, m->meta.map_height, k)
                                  : ssim(pred, truth, k);
            entry.ssim_values.push_back(sv);
            entry.mse_values.push_back(mse(pred, truth));
        }
        entry.mean_ssim = std::accumulate(entry.ssim_values.begin(), entry.ssim_values.end(), 0.0) /
                          static_cast<double>(entry.ssim_values.size());
        entry.mean_mse = std::accumulate(entry.mse_values.begin(), entry.mse_values.end(), 0.0) /
                         static_cast<double>(entry.mse_values.size());
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace fusim::metrics
