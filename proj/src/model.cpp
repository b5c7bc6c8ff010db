#include "fusim/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <utility>

#include "binary_io.hpp"
#include "fusim/common.hpp"
#include "fusim/metrics.hpp"
#include "fusim/rng.hpp"

namespace fusim::model {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;
constexpr double kMomentum = 0.9;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_input(const MlpModel& m, std::size_t got) {
    if (got != m.input_dim()) {
        throw ShapeError("model expects " + std::to_string(m.input_dim()) +
                         " inputs, got " + std::to_string(got));
    }
}

// acts[0] is the input batch; acts[l + 1] holds layer l activations.
// Each output element is one sequential dot product, so results do not
// depend on thread count.
void forward_batch(const MlpModel& m, const Matrix& input, std::vector<Matrix>& acts) {
    const std::size_t n_layers = m.weights.size();
    acts.resize(n_layers + 1);
    acts[0] = input;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const Matrix& w = m.weights[l];
        const std::vector<double>& bias = m.biases[l];
        const Matrix& in = acts[l];
        Matrix& out = acts[l + 1];
        out = Matrix(in.rows, w.rows);
        const bool last = l + 1 == n_layers;
        const std::ptrdiff_t n_rows = static_cast<std::ptrdiff_t>(in.rows);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::ptrdiff_t b = 0; b < n_rows; ++b) {
            const double* xi = &in.a[static_cast<std::size_t>(b) * in.cols];
            double* zo = &out.a[static_cast<std::size_t>(b) * out.cols];
            for (std::size_t o = 0; o < w.rows; ++o) {
                const double* wo = &w.a[o * w.cols];
                double z = bias[o];
                for (std::size_t i = 0; i < w.cols; ++i) z += wo[i] * xi[i];
                zo[o] = last ? sigmoid(z) : (z > 0.0 ? z : 0.0);
            }
        }
    }
}

// Mean over the batch of the per-sample mean squared error, plus the
// parameter gradients of that quantity.
double backward_batch(const MlpModel& m, const std::vector<Matrix>& acts, const Matrix& truth,
                      Gradients& grads) {
    const std::size_t n_layers = m.weights.size();
    const Matrix& pred = acts[n_layers];
    const std::size_t batch = pred.rows;
    const std::size_t out_dim = pred.cols;

    double loss = 0.0;
    Matrix delta(batch, out_dim);
    const double scale = 2.0 / (static_cast<double>(out_dim) * static_cast<double>(batch));
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t o = 0; o < out_dim; ++o) {
            const double a = pred.at(b, o);
            const double d = a - truth.at(b, o);
            loss += d * d;
            delta.at(b, o) = scale * d * a * (1.0 - a);  // sigmoid derivative folded in
        }
    }
    loss /= static_cast<double>(out_dim) * static_cast<double>(batch);

    grads.dw.resize(n_layers);
    grads.db.resize(n_layers);
    for (std::size_t li = n_layers; li-- > 0;) {
        const Matrix& w = m.weights[li];
        const Matrix& in = acts[li];
        Matrix& dw = grads.dw[li];
        std::vector<double>& db = grads.db[li];
        dw = Matrix(w.rows, w.cols);
        db.assign(w.rows, 0.0);

        const std::ptrdiff_t n_out = static_cast<std::ptrdiff_t>(w.rows);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::ptrdiff_t o = 0; o < n_out; ++o) {
            double* dwo = &dw.a[static_cast<std::size_t>(o) * w.cols];
            double acc = 0.0;
            for (std::size_t b = 0; b < batch; ++b) {
                const double d = delta.a[b * w.rows + static_cast<std::size_t>(o)];
                acc += d;
                const double* xi = &in.a[b * in.cols];
                for (std::size_t i = 0; i < w.cols; ++i) dwo[i] += d * xi[i];
            }
            db[static_cast<std::size_t>(o)] = acc;
        }

        if (li > 0) {
            Matrix prev(batch, w.cols);
            const std::ptrdiff_t n_rows = static_cast<std::ptrdiff_t>(batch);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
            for (std::ptrdiff_t b = 0; b < n_rows; ++b) {
                const double* db_row = &delta.a[static_cast<std::size_t>(b) * w.rows];
                double* pv = &prev.a[static_cast<std::size_t>(b) * w.cols];
                for (std::size_t o = 0; o < w.rows; ++o) {
                    const double d = db_row[o];
                    if (d == 0.0) continue;
                    const double* wo = &w.a[o * w.cols];
                    for (std::size_t i = 0; i < w.cols; ++i) pv[i] += d * wo[i];
                }
                // ReLU gate: activations are zero exactly where the unit was off.
                const double* ai = &acts[li].a[static_cast<std::size_t>(b) * w.cols];
                for (std::size_t i = 0; i < w.cols; ++i) {
                    if (ai[i] <= 0.0) pv[i] = 0.0;
                }
            }
            delta = std::move(prev);
        }
    }
    return loss;
}

struct OptState {
    std::vector<Matrix> mw, vw;
    std::vector<std::vector<double>> mb, vb;
    long step = 0;
};

OptState make_opt_state(const MlpModel& m) {
    OptState s;
    for (const Matrix& w : m.weights) {
        s.mw.emplace_back(w.rows, w.cols);
        s.vw.emplace_back(w.rows, w.cols);
    }
    for (const std::vector<double>& b : m.biases) {
        s.mb.emplace_back(b.size(), 0.0);
        s.vb.emplace_back(b.size(), 0.0);
    }
    return s;
}

void adam_update(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& mo,
                 std::vector<double>& vo, double lr, double bc1, double bc2) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        mo[i] = kAdamBeta1 * mo[i] + (1.0 - kAdamBeta1) * g[i];
        vo[i] = kAdamBeta2 * vo[i] + (1.0 - kAdamBeta2) * g[i] * g[i];
        const double mhat = mo[i] / bc1;
        const double vhat = vo[i] / bc2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + kAdamEps);
    }
}

void momentum_update(std::vector<double>& p, const std::vector<double>& g,
                     std::vector<double>& vel, double lr) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        vel[i] = kMomentum * vel[i] - lr * g[i];
        p[i] += vel[i];
    }
}

void apply_update(MlpModel& m, const Gradients& grads, OptState& s, const TrainConfig& cfg) {
    ++s.step;
    if (cfg.optimizer == Optimizer::adam) {
        const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(s.step));
        const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(s.step));
        for (std::size_t l = 0; l < m.weights.size(); ++l) {
            adam_update(m.weights[l].a, grads.dw[l].a, s.mw[l].a, s.vw[l].a, cfg.learning_rate,
                        bc1, bc2);
            adam_update(m.biases[l], grads.db[l], s.mb[l], s.vb[l], cfg.learning_rate, bc1, bc2);
        }
    } else {
        for (std::size_t l = 0; l < m.weights.size(); ++l) {
            momentum_update(m.weights[l].a, grads.dw[l].a, s.vw[l].a, cfg.learning_rate);
            momentum_update(m.biases[l], grads.db[l], s.vb[l], cfg.learning_rate);
        }
    }
}

std::uint32_t mode_code(fusion::FuseMode mode) { return static_cast<std::uint32_t>(mode); }

fusion::FuseMode mode_from_code(std::uint32_t code, const std::string& path) {
    if (code > 2) {
        throw FormatError("'" + path + "': unknown fuse mode code " + std::to_string(code));
    }
    return static_cast<fusion::FuseMode>(code);
}

}  // namespace

MlpModel init_model(const std::vector<std::size_t>& layer_dims, std::uint64_t seed,
                    const ModelMeta& meta) {
    if (layer_dims.size() < 3) {
        throw ShapeError("model needs input, at least one hidden, and output layer; got " +
                         std::to_string(layer_dims.size()) + " dims");
    }
    for (std::size_t d : layer_dims) {
        if (d == 0) throw ShapeError("zero-size layer");
    }
    MlpModel m;
    m.layer_dims = layer_dims;
    m.meta = meta;
    Rng rng(derive_seed(seed, 0x1417));
    for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
        const std::size_t fan_in = layer_dims[l];
        const std::size_t fan_out = layer_dims[l + 1];
        Matrix w(fan_out, fan_in);
        const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& v : w.a) v = rng.normal() * s;
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(fan_out, 0.0);
    }
    return m;
}

std::vector<double> forward(const MlpModel& m, const std::vector<double>& x) {
    check_input(m, x.size());
    Matrix input(1, x.size());
    input.a = x;
    std::vector<Matrix> acts;
    forward_batch(m, input, acts);
    return acts.back().a;
}

double loss_mse(const std::vector<double>& pred, const std::vector<double>& truth) {
    if (pred.size() != truth.size() || pred.empty()) {
        throw ShapeError("loss inputs must be non-empty and equal length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - truth[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pred.size());
}

Gradients backward(const MlpModel& m, const std::vector<double>& x,
                   const std::vector<double>& truth) {
    check_input(m, x.size());
    if (truth.size() != m.output_dim()) {
        throw ShapeError("truth length " + std::to_string(truth.size()) +
                         " does not match model output " + std::to_string(m.output_dim()));
    }
    Matrix input(1, x.size());
    input.a = x;
    Matrix y(1, truth.size());
    y.a = truth;
    std::vector<Matrix> acts;
    forward_batch(m, input, acts);
    Gradients grads;
    backward_batch(m, acts, y, grads);
    return grads;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double split_ratio, std::uint64_t seed) {
    if (n < 2) throw ShapeError("need at least 2 samples to split, got " + std::to_string(n));
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
        throw ConfigError("split ratio must be in (0, 1)");
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(derive_seed(seed, 0x5917));
    for (std::size_t i = n; i-- > 1;) {
        std::swap(order[i], order[rng.index(i + 1)]);
    }
    std::size_t n_train = static_cast<std::size_t>(
        std::llround(split_ratio * static_cast<double>(n)));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
    std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    return {std::move(train), std::move(test)};
}

std::pair<MlpModel, TrainReport> train(const std::vector<io::Sample>& samples,
                                       const TrainConfig& config,
                                       const std::vector<std::size_t>& hidden_dims,
                                       const ModelMeta& meta) {
    const auto t0 = std::chrono::steady_clock::now();
    if (samples.empty()) throw TrainError("empty sample set");
    if (hidden_dims.empty()) throw ShapeError("at least one hidden layer is required");
    if (config.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (config.batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (!(config.learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");

    const std::size_t in_dim = static_cast<std::size_t>(meta.photon_len) + meta.radar_len;
    const std::size_t out_dim = static_cast<std::size_t>(meta.map_width) * meta.map_height;
    for (const io::Sample& s : samples) {
        if (s.fused.size() != in_dim || s.truth.size() != out_dim) {
            throw ShapeError("sample shape " + std::to_string(s.fused.size()) + "+" +
                             std::to_string(s.truth.size()) + " does not match model " +
                             std::to_string(in_dim) + "+" + std::to_string(out_dim));
        }
    }

    std::vector<std::size_t> dims;
    dims.push_back(in_dim);
    dims.insert(dims.end(), hidden_dims.begin(), hidden_dims.end());
    dims.push_back(out_dim);
    MlpModel m = init_model(dims, config.seed, meta);

    auto [train_idx, test_idx] = split_indices(samples.size(), config.split_ratio, config.seed);

    // Materialize masked inputs and targets once, as dense matrices.
    auto gather = [&](const std::vector<std::size_t>& idx, Matrix& x, Matrix& y) {
        x = Matrix(idx.size(), in_dim);
        y = Matrix(idx.size(), out_dim);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            const io::Sample& s = samples[idx[r]];
            const std::vector<double> masked = mask_for_mode(m, s.fused);
            std::copy(masked.begin(), masked.end(), x.a.begin() + static_cast<std::ptrdiff_t>(r * in_dim));
            for (std::size_t c = 0; c < out_dim; ++c) y.at(r, c) = s.truth[c];
        }
    };
    Matrix x_train, y_train, x_test, y_test;
    gather(train_idx, x_train, y_train);
    gather(test_idx, x_test, y_test);

    OptState opt = make_opt_state(m);
    TrainReport report;
    report.n_train = train_idx.size();
    report.n_test = test_idx.size();

    const metrics::SsimConstants ssim_k = metrics::SsimConstants::make();
    std::vector<std::size_t> order(train_idx.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<Matrix> acts;
    Gradients grads;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(config.seed, 0xe90c + static_cast<std::uint64_t>(epoch)));
        for (std::size_t i = order.size(); i-- > 1;) {
            std::swap(order[i], order[shuffle_rng.index(i + 1)]);
        }

        double epoch_loss = 0.0;
        const std::size_t bs = static_cast<std::size_t>(config.batch_size);
        for (std::size_t start = 0; start < order.size(); start += bs) {
            const std::size_t count = std::min(bs, order.size() - start);
            Matrix xb(count, in_dim);
            Matrix yb(count, out_dim);
            for (std::size_t r = 0; r < count; ++r) {
                const std::size_t src = order[start + r];
                std::memcpy(&xb.a[r * in_dim], &x_train.a[src * in_dim], in_dim * sizeof(double));
                std::memcpy(&yb.a[r * out_dim], &y_train.a[src * out_dim], out_dim * sizeof(double));
            }
            forward_batch(m, xb, acts);
            const double batch_loss = backward_batch(m, acts, yb, grads);
            epoch_loss += batch_loss * static_cast<double>(count);
            apply_update(m, grads, opt, config);
        }
        epoch_loss /= static_cast<double>(order.size());
        if (!std::isfinite(epoch_loss)) {
            throw TrainError("non-finite training loss at epoch " + std::to_string(epoch));
        }
        report.train_loss.push_back(epoch_loss);

        forward_batch(m, x_test, acts);
        const Matrix& pred = acts.back();
        double tl = 0.0;
        double ts = 0.0;
        std::vector<double> p_row(out_dim), t_row(out_dim);
        for (std::size_t r = 0; r < pred.rows; ++r) {
            std::memcpy(p_row.data(), &pred.a[r * out_dim], out_dim * sizeof(double));
            std::memcpy(t_row.data(), &y_test.a[r * out_dim], out_dim * sizeof(double));
            tl += loss_mse(p_row, t_row);
            ts += metrics::ssim(p_row, t_row, ssim_k);
        }
        report.test_loss.push_back(tl / static_cast<double>(pred.rows));
        report.test_ssim.push_back(ts / static_cast<double>(pred.rows));
    }

    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(m), std::move(report)};
}

scene::DepthMap predict(const MlpModel& m, const std::vector<double>& fused) {
    const std::vector<double> out = forward(m, fused);
    scene::DepthMap dm;
    dm.width = static_cast<int>(m.meta.map_width);
    dm.height = static_cast<int>(m.meta.map_height);
    dm.fov_x = m.meta.fov_x;
    dm.fov_y = m.meta.fov_y;
    dm.no_return = m.meta.depth_norm;
    dm.depth.resize(out.size());
    dm.reflectivity.assign(out.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) dm.depth[i] = out[i] * m.meta.depth_norm;
    return dm;
}

std::vector<double> mask_for_mode(const MlpModel& m, const std::vector<float>& fused) {
    const std::size_t photon_len = m.meta.photon_len;
    const std::size_t expected = photon_len + m.meta.radar_len;
    if (fused.size() != expected) {
        throw ShapeError("fused vector length " + std::to_string(fused.size()) +
                         " does not match model input " + std::to_string(expected));
    }
    std::vector<double> out(fused.begin(), fused.end());
    if (m.meta.mode == fusion::FuseMode::photon_only) {
        std::fill(out.begin() + static_cast<std::ptrdiff_t>(photon_len), out.end(), 0.0);
    } else if (m.meta.mode == fusion::FuseMode::radar_only) {
        std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(photon_len), 0.0);
    }
    return out;
}

void save_model(const MlpModel& m, const std::string& path) {
    std::vector<unsigned char> buf;
    buf.insert(buf.end(), kModelMagic, kModelMagic + 4);
    detail::put_u32(buf, kModelVersion);
    detail::put_u32(buf, m.meta.photon_len);
    detail::put_u32(buf, m.meta.radar_len);
    detail::put_u32(buf, m.meta.map_width);
    detail::put_u32(buf, m.meta.map_height);
    detail::put_u32(buf, mode_code(m.meta.mode));
    detail::put_f64(buf, m.meta.depth_norm);
    detail::put_f64(buf, m.meta.fov_x);
    detail::put_f64(buf, m.meta.fov_y);
    detail::put_u32(buf, static_cast<std::uint32_t>(m.layer_dims.size()));
    for (std::size_t d : m.layer_dims) detail::put_u64(buf, d);
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        for (double v : m.weights[l].a) detail::put_f64(buf, v);
        for (double v : m.biases[l]) detail::put_f64(buf, v);
    }
    detail::write_file_bytes(path, buf);
}

MlpModel load_model(const std::string& path) {
    const std::vector<unsigned char> buf = detail::read_file_bytes(path);
    detail::Reader r(buf.data(), buf.size(), path);
    unsigned char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kModelMagic, 4) != 0) {
        throw BadMagicError("'" + path + "' is not a model checkpoint");
    }
    const std::uint32_t version = r.u32();
    if (version != kModelVersion) {
        throw BadVersionError("'" + path + "': checkpoint version " + std::to_string(version) +
                              ", expected " + std::to_string(kModelVersion));
    }
    MlpModel m;
    m.meta.photon_len = r.u32();
    m.meta.radar_len = r.u32();
    m.meta.map_width = r.u32();
    m.meta.map_height = r.u32();
    m.meta.mode = mode_from_code(r.u32(), path);
    m.meta.depth_norm = r.f64();
    m.meta.fov_x = r.f64();
    m.meta.fov_y = r.f64();
    const std::uint32_t n_dims = r.u32();
    if (n_dims < 3) throw FormatError("'" + path + "': fewer than 3 layer dims");
    for (std::uint32_t i = 0; i < n_dims; ++i) {
        const std::uint64_t d = r.u64();
        if (d == 0 || d > (1u << 24)) {
            throw FormatError("'" + path + "': implausible layer size " + std::to_string(d));
        }
        m.layer_dims.push_back(static_cast<std::size_t>(d));
    }
    if (m.input_dim() != static_cast<std::size_t>(m.meta.photon_len) + m.meta.radar_len) {
        throw FormatError("'" + path + "': input layer does not match metadata lengths");
    }
    if (m.output_dim() != static_cast<std::size_t>(m.meta.map_width) * m.meta.map_height) {
        throw FormatError("'" + path + "': output layer does not match metadata map size");
    }
    for (std::size_t l = 0; l + 1 < m.layer_dims.size(); ++l) {
        Matrix w(m.layer_dims[l + 1], m.layer_dims[l]);
        for (double& v : w.a) v = r.f64();
        std::vector<double> b(m.layer_dims[l + 1]);
        for (double& v : b) v = r.f64();
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    if (r.remaining() != 0) {
        throw FormatError("'" + path + "': " + std::to_string(r.remaining()) +
                          " trailing bytes after parameters");
    }
    return m;
}

}  // namespace fusim::model
