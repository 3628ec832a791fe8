#include "blockid/blockmodel.hpp"

#include <algorithm>
#include <cmath>

#include "blockid/errors.hpp"
#include "blockid/textio.hpp"

namespace blockid {

using textio::KvFile;

namespace {

constexpr const char* kSchema = "blockid-model v1";

}  // namespace

void PiecewiseLinearMap::validate() const {
    if (breakpoints.size() < 2) {
        throw DomainError("piecewise linear map: needs at least 2 breakpoints");
    }
    if (breakpoints.size() != values.size()) {
        throw ShapeError("piecewise linear map: breakpoint/value count mismatch");
    }
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i] < breakpoints[i + 1])) {
            throw DomainError("piecewise linear map: breakpoints must be strictly increasing");
        }
    }
    for (double v : breakpoints) {
        if (!std::isfinite(v)) throw DomainError("piecewise linear map: non-finite breakpoint");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError("piecewise linear map: non-finite value");
    }
}

std::pair<std::size_t, double> PiecewiseLinearMap::locate(double x) const {
    const std::size_t last = breakpoints.size() - 1;
    std::size_t seg;
    if (x <= breakpoints.front()) {
        seg = 0;
    } else if (x >= breakpoints[last]) {
        seg = last - 1;
    } else {
        // First breakpoint strictly greater than x; segment is the one before.
        seg = static_cast<std::size_t>(
                  std::upper_bound(breakpoints.begin(), breakpoints.end(), x) -
                  breakpoints.begin()) -
              1;
    }
    const double t = (x - breakpoints[seg]) / (breakpoints[seg + 1] - breakpoints[seg]);
    return {seg, t};
}

double PiecewiseLinearMap::eval(double x) const {
    const auto [seg, t] = locate(x);
    return values[seg] + t * (values[seg + 1] - values[seg]);
}

double PiecewiseLinearMap::slope_at(double x) const {
    const auto [seg, t] = locate(x);
    (void)t;
    return (values[seg + 1] - values[seg]) / (breakpoints[seg + 1] - breakpoints[seg]);
}

PiecewiseLinearMap PiecewiseLinearMap::identity(double lo, double hi, int count) {
    if (count < 2) throw DomainError("piecewise linear map: count must be >= 2");
    if (!(lo < hi)) throw DomainError("piecewise linear map: lo must be < hi");
    PiecewiseLinearMap map;
    for (int i = 0; i < count; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
        map.breakpoints.push_back(x);
        map.values.push_back(x);
    }
    return map;
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Linear: return "linear";
        case ModelKind::Hammerstein: return "hammerstein";
        case ModelKind::Wiener: return "wiener";
        case ModelKind::WienerHammerstein: return "wiener-hammerstein";
    }
    throw DomainError("unknown model kind");
}

ModelKind model_kind_from_string(const std::string& text) {
    if (text == "linear") return ModelKind::Linear;
    if (text == "hammerstein" || text == "hs") return ModelKind::Hammerstein;
    if (text == "wiener") return ModelKind::Wiener;
    if (text == "wiener-hammerstein" || text == "wh") return ModelKind::WienerHammerstein;
    throw ParseError("unknown model kind '" + text + "'");
}

int BlockModel::parameter_count() const {
    int count = 0;
    for (const TransferFunction& tf : front) {
        count += static_cast<int>(tf.num.size()) + static_cast<int>(tf.den.size()) - 1;
    }
    if (nonlinearity) count += 2 * static_cast<int>(nonlinearity->breakpoints.size());
    if (back) {
        count += static_cast<int>(back->num.size()) + static_cast<int>(back->den.size()) - 1;
    }
    return count;
}

void BlockModel::validate() const {
    const bool has_front = !front.empty();
    const bool has_g = nonlinearity.has_value();
    const bool has_back = back.has_value();
    if (channels < 1) {
        throw DomainError("block model: channel count must be >= 1");
    }
    if (has_front && static_cast<int>(front.size()) != channels) {
        throw DomainError("block model: one front block per input channel required");
    }
    switch (kind) {
        case ModelKind::Linear:
            if (!has_front || has_g || has_back) {
                throw DomainError("linear model must have only per-channel blocks");
            }
            break;
        case ModelKind::Hammerstein:
            if (has_front || !has_g || !has_back) {
                throw DomainError(
                    "hammerstein model must have a nonlinearity and a back block, no front "
                    "block");
            }
            break;
        case ModelKind::Wiener:
            if (!has_front || !has_g || has_back) {
                throw DomainError("wiener model must have front blocks and a nonlinearity");
            }
            break;
        case ModelKind::WienerHammerstein:
            if (!has_front || !has_g || !has_back) {
                throw DomainError(
                    "wiener-hammerstein model must have front blocks, a nonlinearity and a "
                    "back block");
            }
            break;
    }
    for (const TransferFunction& tf : front) tf.validate();
    if (nonlinearity) nonlinearity->validate();
    if (back) back->validate();
}

namespace {

std::vector<double> sum_front(const BlockModel& model, const Eigen::MatrixXd& inputs) {
    const Eigen::Index n = inputs.rows();
    std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
    if (model.front.empty()) {
        for (Eigen::Index c = 0; c < inputs.cols(); ++c) {
            for (Eigen::Index t = 0; t < n; ++t) acc[static_cast<std::size_t>(t)] += inputs(t, c);
        }
        return acc;
    }
    for (std::size_t c = 0; c < model.front.size(); ++c) {
        std::vector<double> u(static_cast<std::size_t>(n));
        for (Eigen::Index t = 0; t < n; ++t) u[static_cast<std::size_t>(t)] = inputs(t, static_cast<Eigen::Index>(c));
        const std::vector<double> yc = simulate_tf(model.front[c], u);
        for (Eigen::Index t = 0; t < n; ++t) acc[static_cast<std::size_t>(t)] += yc[static_cast<std::size_t>(t)];
    }
    return acc;
}

}  // namespace

std::vector<double> simulate_model(const BlockModel& model, const Eigen::MatrixXd& inputs) {
    model.validate();
    if (inputs.cols() != static_cast<Eigen::Index>(model.channels)) {
        throw ShapeError("simulate_model: expected " + std::to_string(model.channels) +
                         " input channels, got " + std::to_string(inputs.cols()));
    }
    if (!inputs.allFinite()) {
        throw DomainError("simulate_model: non-finite inputs");
    }

    std::vector<double> signal = sum_front(model, inputs);
    if (model.nonlinearity) {
        for (double& v : signal) v = model.nonlinearity->eval(v);
    }
    if (model.back) {
        signal = simulate_tf(*model.back, signal);
    }
    return signal;
}

BlockModel canonicalized(const BlockModel& model) {
    model.validate();
    BlockModel out = model;
    if (!out.nonlinearity) {
        out.canonical = true;
        return out;  // Linear: nothing to fold gains into
    }

    if (!out.front.empty()) {
        double scale = 0.0;
        try {
            scale = dc_gain(out.front[0]);
        } catch (const DomainError&) {
            scale = 0.0;
        }
        if (scale != 0.0 && std::isfinite(scale)) {
            for (TransferFunction& tf : out.front) {
                for (double& c : tf.num) c /= scale;
            }
            PiecewiseLinearMap& g = *out.nonlinearity;
            for (double& b : g.breakpoints) b /= scale;
            if (scale < 0.0) {
                std::reverse(g.breakpoints.begin(), g.breakpoints.end());
                std::reverse(g.values.begin(), g.values.end());
            }
        }
    }
    if (out.back) {
        double scale = 0.0;
        try {
            scale = dc_gain(*out.back);
        } catch (const DomainError&) {
            scale = 0.0;
        }
        if (scale != 0.0 && std::isfinite(scale)) {
            for (double& c : out.back->num) c /= scale;
            for (double& v : out.nonlinearity->values) v *= scale;
        }
    }
    out.canonical = true;
    out.validate();
    return out;
}

void ModelBundle::validate() const {
    if (models.empty()) {
        throw DomainError("model bundle: needs at least one model");
    }
    const int channels = models.front().input_channels();
    for (const BlockModel& m : models) {
        m.validate();
        if (m.input_channels() != channels) {
            throw DomainError("model bundle: models disagree on input channel count");
        }
    }
}

namespace {

void write_tf(KvFile& kv, const std::string& section, const std::string& prefix,
              const TransferFunction& tf) {
    kv.add(section, prefix + ".num", textio::format_double_list(tf.num));
    kv.add(section, prefix + ".den", textio::format_double_list(tf.den));
    kv.add(section, prefix + ".delay", std::to_string(tf.input_delay));
}

TransferFunction read_tf(const KvFile& kv, const std::string& section,
                         const std::string& prefix) {
    TransferFunction tf;
    tf.num = textio::parse_double_list(kv.require(section, prefix + ".num"), prefix + ".num");
    tf.den = textio::parse_double_list(kv.require(section, prefix + ".den"), prefix + ".den");
    if (const std::string* d = kv.find(section, prefix + ".delay")) {
        tf.input_delay = static_cast<int>(std::strtol(d->c_str(), nullptr, 10));
    }
    tf.validate();
    if (!is_stable(tf)) {
        throw ParseError("model file: block '" + prefix + "' in [" + section +
                         "] is unstable");
    }
    return tf;
}

}  // namespace

void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
    bundle.validate();
    KvFile kv;
    kv.schema = kSchema;
    kv.add("", "models", std::to_string(bundle.models.size()));
    for (const auto& [key, value] : bundle.metadata) {
        kv.add("", key, value);
    }
    for (std::size_t i = 0; i < bundle.models.size(); ++i) {
        const BlockModel& m = bundle.models[i];
        const std::string section = "model " + std::to_string(i);
        kv.add(section, "kind", to_string(m.kind));
        kv.add(section, "channels", std::to_string(m.input_channels()));
        kv.add(section, "canonical", m.canonical ? "1" : "0");
        if (!m.front.empty()) {
            kv.add(section, "front.count", std::to_string(m.front.size()));
            for (std::size_t c = 0; c < m.front.size(); ++c) {
                write_tf(kv, section, "front." + std::to_string(c), m.front[c]);
            }
        }
        if (m.nonlinearity) {
            kv.add(section, "g.breakpoints",
                   textio::format_double_list(m.nonlinearity->breakpoints));
            kv.add(section, "g.values", textio::format_double_list(m.nonlinearity->values));
        }
        if (m.back) {
            write_tf(kv, section, "back", *m.back);
        }
    }
    kv.save(path);
}

ModelBundle load_model(const std::filesystem::path& path) {
    const KvFile kv = KvFile::load(path);
    if (kv.schema != kSchema) {
        throw ParseError(path.string() + ": expected schema '" + kSchema + "', found '" +
                         kv.schema + "'");
    }
    ModelBundle bundle;
    const long count = std::strtol(kv.require("", "models").c_str(), nullptr, 10);
    if (count < 1) {
        throw ParseError(path.string() + ": model count must be >= 1");
    }
    for (const KvFile::Entry& e : kv.entries) {
        if (e.section.empty() && e.key != "models") {
            bundle.metadata[e.key] = e.value;
        }
    }
    for (long i = 0; i < count; ++i) {
        const std::string section = "model " + std::to_string(i);
        if (!kv.has_section(section)) {
            throw ParseError(path.string() + ": missing section [" + section + "]");
        }
        BlockModel m;
        m.kind = model_kind_from_string(kv.require(section, "kind"));
        m.channels = static_cast<int>(
            std::strtol(kv.require(section, "channels").c_str(), nullptr, 10));
        if (const std::string* c = kv.find(section, "canonical")) {
            m.canonical = (*c == "1");
        }
        if (kv.find(section, "front.count")) {
            const long fc = std::strtol(kv.require(section, "front.count").c_str(), nullptr, 10);
            for (long c = 0; c < fc; ++c) {
                m.front.push_back(read_tf(kv, section, "front." + std::to_string(c)));
            }
        }
        if (kv.find(section, "g.breakpoints") || kv.find(section, "g.values")) {
            PiecewiseLinearMap g;
            g.breakpoints = textio::parse_double_list(kv.require(section, "g.breakpoints"),
                                                      "g.breakpoints");
            g.values = textio::parse_double_list(kv.require(section, "g.values"), "g.values");
            m.nonlinearity = std::move(g);
        }
        if (kv.find(section, "back.num")) {
            m.back = read_tf(kv, section, "back");
        }
        try {
            m.validate();
        } catch (const DomainError& err) {
            throw ParseError(path.string() + ": [" + section + "] " + err.what());
        }
        bundle.models.push_back(std::move(m));
    }
    bundle.validate();
    return bundle;
}

}  // namespace blockid
