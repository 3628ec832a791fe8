#include "blockid/plant.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "blockid/errors.hpp"
#include "blockid/textio.hpp"

namespace blockid {

using textio::KvFile;

std::string to_string(PlantKind kind) {
    switch (kind) {
        case PlantKind::Linear: return "linear";
        case PlantKind::Wiener: return "wiener";
        case PlantKind::Hammerstein: return "hammerstein";
        case PlantKind::WienerHammerstein: return "wiener-hammerstein";
        case PlantKind::HystereticFoam: return "hysteretic-foam";
        case PlantKind::Miso3: return "miso3";
    }
    throw DomainError("unknown plant kind");
}

PlantKind plant_kind_from_string(const std::string& text) {
    if (text == "linear") return PlantKind::Linear;
    if (text == "wiener") return PlantKind::Wiener;
    if (text == "hammerstein") return PlantKind::Hammerstein;
    if (text == "wiener-hammerstein" || text == "wh") return PlantKind::WienerHammerstein;
    if (text == "hysteretic-foam" || text == "foam") return PlantKind::HystereticFoam;
    if (text == "miso3") return PlantKind::Miso3;
    throw ParseError("unknown plant kind '" + text + "'");
}

double ExpSaturation::eval(double x) const { return c1 * (std::exp(c2 * x) - 1.0); }

void PlantSpec::validate() const {
    if (channels < 1 || outputs < 1) {
        throw DomainError("plant '" + name + "': channels and outputs must be >= 1");
    }
    if (static_cast<int>(sensors.size()) != channels) {
        throw DomainError("plant '" + name + "': one sensor block per channel required");
    }
    if (!fronts.empty() && static_cast<int>(fronts.size()) != channels) {
        throw DomainError("plant '" + name + "': front block count must match channels");
    }
    if (mix.size() != 0 && (mix.rows() != outputs || mix.cols() != channels)) {
        throw DomainError("plant '" + name + "': mixing matrix must be outputs x channels");
    }
    if (static_cast<int>(nonlins.size()) != outputs ||
        static_cast<int>(backs.size()) != outputs) {
        throw DomainError("plant '" + name + "': per-output block lists must match outputs");
    }
    if (noise_rel < 0.0) {
        throw DomainError("plant '" + name + "': noise must be >= 0");
    }
    for (const TransferFunction& tf : sensors) {
        tf.validate();
        if (!is_stable(tf)) throw DomainError("plant '" + name + "': unstable sensor block");
    }
    for (const TransferFunction& tf : fronts) {
        tf.validate();
        if (!is_stable(tf)) throw DomainError("plant '" + name + "': unstable front block");
    }
    for (const auto& tf : backs) {
        if (!tf) continue;
        tf->validate();
        if (!is_stable(*tf)) throw DomainError("plant '" + name + "': unstable back block");
    }
}

std::string to_string(ExcitationPattern pattern) {
    switch (pattern) {
        case ExcitationPattern::step_cycles: return "step_cycles";
        case ExcitationPattern::gradual_increase: return "gradual_increase";
        case ExcitationPattern::mixed_parallel: return "mixed_parallel";
    }
    throw DomainError("unknown excitation pattern");
}

void ExcitationProgram::validate() const {
    if (levels_kpa.empty()) {
        throw DomainError("excitation program: needs at least one pressure level");
    }
    if (!(on_seconds > 0.0) || !(off_seconds > 0.0)) {
        throw DomainError("excitation program: durations must be > 0");
    }
    if (cycles < 1) {
        throw DomainError("excitation program: cycles must be >= 1");
    }
    if (channels < 1) {
        throw DomainError("excitation program: channels must be >= 1");
    }
}

namespace {

long steps_of(double seconds, double dt) {
    return std::lround(seconds / dt);
}

void append_hold(std::vector<Eigen::VectorXd>& rows, const Eigen::VectorXd& level,
                 long steps) {
    for (long i = 0; i < steps; ++i) rows.push_back(level);
}

Eigen::MatrixXd to_matrix(const std::vector<Eigen::VectorXd>& rows, int channels) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), channels);
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = rows[i];
    return out;
}

}  // namespace

Eigen::MatrixXd generate_excitation(const ExcitationProgram& program, double dt) {
    program.validate();
    if (!(dt > 0.0)) {
        throw DomainError("generate_excitation: dt must be > 0");
    }
    const int ch = program.channels;
    const long on = steps_of(program.on_seconds, dt);
    const long off = steps_of(program.off_seconds, dt);
    std::vector<Eigen::VectorXd> rows;
    const Eigen::VectorXd rest = Eigen::VectorXd::Zero(ch);

    switch (program.pattern) {
        case ExcitationPattern::step_cycles: {
            const double level = program.levels_kpa.front();
            auto cycle_on = [&](const std::vector<int>& active) {
                Eigen::VectorXd v = rest;
                for (int c : active) v(c) = level;
                for (int k = 0; k < program.cycles; ++k) {
                    append_hold(rows, v, on);
                    append_hold(rows, rest, off);
                }
            };
            if (ch == 1) {
                cycle_on({0});
            } else {
                // Each channel pulses alone, then all together.
                for (int c = 0; c < ch; ++c) cycle_on({c});
                std::vector<int> all(static_cast<std::size_t>(ch));
                for (int c = 0; c < ch; ++c) all[static_cast<std::size_t>(c)] = c;
                cycle_on(all);
            }
            break;
        }
        case ExcitationPattern::gradual_increase: {
            append_hold(rows, rest, off);
            std::vector<double> staircase = program.levels_kpa;
            for (std::size_t i = program.levels_kpa.size() - 1; i-- > 0;) {
                staircase.push_back(program.levels_kpa[i]);
            }
            for (double level : staircase) {
                append_hold(rows, Eigen::VectorXd::Constant(ch, level), on);
            }
            append_hold(rows, rest, off);
            break;
        }
        case ExcitationPattern::mixed_parallel: {
            if (ch < 2) {
                throw DomainError("mixed_parallel excitation needs at least 2 channels");
            }
            const std::size_t half = (program.levels_kpa.size() + 1) / 2;
            const std::vector<double> low(program.levels_kpa.begin(),
                                          program.levels_kpa.begin() + static_cast<long>(half));
            std::vector<double> high(program.levels_kpa.begin() + static_cast<long>(half),
                                     program.levels_kpa.end());
            if (high.empty()) high = low;
            // Channel 0 pulses through `low` on an on/off grid; channel 1 holds
            // each `high` level for two grid slots. Remaining channels rest.
            const std::size_t slots = std::max(low.size(), 2 * high.size());
            for (std::size_t s = 0; s < slots; ++s) {
                Eigen::VectorXd v = rest;
                v(0) = low[s % low.size()];
                if (s / 2 < high.size()) v(1) = high[s / 2];
                append_hold(rows, v, on);
                Eigen::VectorXd gap = rest;
                if ((s + 1) / 2 < high.size() && (s + 1) % 2 == 1) {
                    gap(1) = high[(s + 1) / 2];
                }
                append_hold(rows, gap, off);
            }
            append_hold(rows, rest, off);
            break;
        }
    }
    return to_matrix(rows, ch);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

TimeSeriesDataset simulate_plant(const PlantSpec& spec, const Eigen::MatrixXd& pressure_kpa,
                                 double dt, DatasetRole role, const std::string& name,
                                 std::uint64_t noise_stream) {
    spec.validate();
    if (pressure_kpa.cols() != spec.channels) {
        throw ShapeError("simulate_plant: pressure must have " +
                         std::to_string(spec.channels) + " channels");
    }
    if (!(dt > 0.0)) {
        throw DomainError("simulate_plant: dt must be > 0");
    }
    const Eigen::Index n = pressure_kpa.rows();

    // Sensing chain: pressure -> resistance change in percent.
    Eigen::MatrixXd delta_r(n, spec.channels);
    for (int c = 0; c < spec.channels; ++c) {
        std::vector<double> u(static_cast<std::size_t>(n));
        for (Eigen::Index t = 0; t < n; ++t) u[static_cast<std::size_t>(t)] = pressure_kpa(t, c);
        const std::vector<double> r = simulate_tf(spec.sensors[static_cast<std::size_t>(c)], u);
        for (Eigen::Index t = 0; t < n; ++t) delta_r(t, c) = r[static_cast<std::size_t>(t)];
    }

    // Deformation chain on the normalized resistance change.
    Eigen::MatrixXd filtered(n, spec.channels);
    for (int c = 0; c < spec.channels; ++c) {
        std::vector<double> u(static_cast<std::size_t>(n));
        for (Eigen::Index t = 0; t < n; ++t) u[static_cast<std::size_t>(t)] = delta_r(t, c) / 100.0;
        std::vector<double> v = spec.fronts.empty()
                                    ? u
                                    : simulate_tf(spec.fronts[static_cast<std::size_t>(c)], u);
        for (Eigen::Index t = 0; t < n; ++t) filtered(t, c) = v[static_cast<std::size_t>(t)];
    }
    Eigen::MatrixXd mixed;
    if (spec.mix.size() == 0) {
        mixed = filtered.rowwise().sum();
    } else {
        mixed = filtered * spec.mix.transpose();
    }

    Eigen::MatrixXd outputs(n, spec.outputs);
    for (int o = 0; o < spec.outputs; ++o) {
        std::vector<double> w(static_cast<std::size_t>(n));
        const auto& g = spec.nonlins[static_cast<std::size_t>(o)];
        for (Eigen::Index t = 0; t < n; ++t) {
            const double v = mixed(t, o);
            w[static_cast<std::size_t>(t)] = g ? g->eval(v) : v;
        }
        const auto& back = spec.backs[static_cast<std::size_t>(o)];
        std::vector<double> y = back ? simulate_tf(*back, w) : w;
        for (Eigen::Index t = 0; t < n; ++t) outputs(t, o) = y[static_cast<std::size_t>(t)];
    }

    if (spec.noise_rel > 0.0) {
        std::mt19937_64 rng(splitmix64(spec.seed) ^ splitmix64(noise_stream + 1));
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int o = 0; o < spec.outputs; ++o) {
            const double range = outputs.col(o).maxCoeff() - outputs.col(o).minCoeff();
            const double sd = spec.noise_rel * range;
            for (Eigen::Index t = 0; t < n; ++t) outputs(t, o) += sd * gauss(rng);
        }
    }

    TimeSeriesDataset ds;
    ds.name = name;
    ds.sample_period = dt;
    ds.inputs = delta_r;
    ds.outputs = outputs;
    ds.role = role;
    for (int c = 0; c < spec.channels; ++c) {
        ds.input_names.push_back("dR" + std::to_string(c) + "[%]");
    }
    for (int o = 0; o < spec.outputs; ++o) {
        ds.output_names.push_back(
            spec.output_names.empty() ? "y" + std::to_string(o)
                                      : spec.output_names[static_cast<std::size_t>(o)]);
    }
    ds.extra["plant"] = spec.name;
    ds.extra["seed"] = std::to_string(spec.seed);
    ds.validate();
    return ds;
}

std::vector<TimeSeriesDataset> generate_standard_suite(const PlantSpec& spec, double dt,
                                                       int cycles) {
    auto step_program = [&](double level) {
        ExcitationProgram p;
        p.pattern = ExcitationPattern::step_cycles;
        p.levels_kpa = {level};
        p.cycles = cycles;
        p.channels = spec.channels;
        return p;
    };
    ExcitationProgram gradual;
    gradual.pattern = ExcitationPattern::gradual_increase;
    gradual.levels_kpa = {-10.0, -20.0, -40.0, -60.0};
    gradual.channels = spec.channels;

    struct Entry {
        std::string suffix;
        ExcitationProgram program;
        DatasetRole role;
    };
    const std::vector<Entry> entries = {
        {"step-10", step_program(-10.0), DatasetRole::identification},
        {"step-60", step_program(-60.0), DatasetRole::identification},
        {"gradual", gradual, DatasetRole::identification},
        {"step-20", step_program(-20.0), DatasetRole::validation},
        {"step-40", step_program(-40.0), DatasetRole::validation},
    };
    std::vector<TimeSeriesDataset> out;
    std::uint64_t stream = 0;
    for (const Entry& e : entries) {
        const Eigen::MatrixXd pressure = generate_excitation(e.program, dt);
        out.push_back(simulate_plant(spec, pressure, dt, e.role,
                                     spec.name + "-" + e.suffix, stream++));
    }
    return out;
}

HysteresisLoop hysteresis_loop(const TimeSeriesDataset& dataset, int poly_order,
                               int input_channel, int output_channel) {
    dataset.validate();
    if (poly_order < 1 || poly_order > 6) {
        throw DomainError("hysteresis loop: polynomial order must be in [1, 6]");
    }
    if (input_channel < 0 || input_channel >= dataset.input_channels() ||
        output_channel < 0 || output_channel >= dataset.output_channels()) {
        throw ShapeError("hysteresis loop: channel index out of range");
    }
    const Eigen::VectorXd x = dataset.inputs.col(input_channel);
    const Eigen::VectorXd y = dataset.outputs.col(output_channel);
    const Eigen::Index n = x.size();

    std::vector<Eigen::Index> loading;
    std::vector<Eigen::Index> unloading;
    int direction = 0;  // +1 while the input grows, -1 while it falls
    bool saw_up = false;
    bool saw_down = false;
    for (Eigen::Index t = 1; t < n; ++t) {
        const double dx = x(t) - x(t - 1);
        if (dx > 0.0) {
            direction = +1;
            saw_up = true;
        } else if (dx < 0.0) {
            direction = -1;
            saw_down = true;
        }
        if (direction > 0) {
            unloading.push_back(t);  // vacuum released, resistance recovering
        } else if (direction < 0) {
            loading.push_back(t);
        }
    }
    if (!saw_up || !saw_down) {
        throw DomainError("hysteresis loop: input never changes direction, no cycle found");
    }

    auto fit_branch = [&](const std::vector<Eigen::Index>& idx) {
        Eigen::MatrixXd a(static_cast<Eigen::Index>(idx.size()), poly_order + 1);
        Eigen::VectorXd b(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i) {
            double p = 1.0;
            for (int k = 0; k <= poly_order; ++k) {
                a(static_cast<Eigen::Index>(i), k) = p;
                p *= x(idx[i]);
            }
            b(static_cast<Eigen::Index>(i)) = y(idx[i]);
        }
        return Eigen::VectorXd(a.colPivHouseholderQr().solve(b));
    };

    HysteresisLoop loop;
    loop.poly_order = poly_order;
    loop.n_loading = loading.size();
    loop.n_unloading = unloading.size();
    if (static_cast<int>(loading.size()) > poly_order) loop.loading_coeffs = fit_branch(loading);
    if (static_cast<int>(unloading.size()) > poly_order) {
        loop.unloading_coeffs = fit_branch(unloading);
    }

    // Signed area swept in the (input, output) plane over the whole record.
    double area = 0.0;
    for (Eigen::Index t = 1; t < n; ++t) {
        area += 0.5 * (y(t) + y(t - 1)) * (x(t) - x(t - 1));
    }
    loop.area = std::abs(area);
    return loop;
}

namespace {

TransferFunction read_catalog_tf(const KvFile& kv, const std::string& section,
                                 const std::string& prefix) {
    TransferFunction tf;
    tf.num = textio::parse_double_list(kv.require(section, prefix + ".num"), prefix);
    tf.den = textio::parse_double_list(kv.require(section, prefix + ".den"), prefix);
    tf.validate();
    return tf;
}

}  // namespace

const PlantSpec* PlantCatalog::find(const std::string& name) const {
    for (const PlantSpec& p : plants) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

const PlantSpec& PlantCatalog::require(const std::string& name) const {
    if (const PlantSpec* p = find(name)) return *p;
    throw DomainError("unknown plant '" + name + "'; catalog has: " +
                      textio::join(names(), ", "));
}

std::vector<std::string> PlantCatalog::names() const {
    std::vector<std::string> out;
    for (const PlantSpec& p : plants) out.push_back(p.name);
    return out;
}

PlantCatalog PlantCatalog::load(const std::filesystem::path& path) {
    const KvFile kv = KvFile::load(path);
    if (kv.schema != "blockid-plants v1") {
        throw ParseError(path.string() + ": expected schema 'blockid-plants v1'");
    }
    PlantCatalog catalog;
    for (const std::string& section : kv.sections()) {
        if (section.rfind("plant ", 0) != 0) continue;
        PlantSpec spec;
        spec.name = section.substr(6);
        spec.kind = plant_kind_from_string(kv.require(section, "kind"));
        if (const std::string* v = kv.find(section, "channels")) {
            spec.channels = static_cast<int>(std::strtol(v->c_str(), nullptr, 10));
        }
        if (const std::string* v = kv.find(section, "outputs")) {
            spec.outputs = static_cast<int>(std::strtol(v->c_str(), nullptr, 10));
        }
        if (const std::string* v = kv.find(section, "noise_rel")) {
            spec.noise_rel = textio::parse_finite_double(*v, section + ": noise_rel");
        }
        for (int c = 0; c < spec.channels; ++c) {
            const std::string prefix =
                spec.channels == 1 ? "sensor" : "sensor." + std::to_string(c);
            spec.sensors.push_back(read_catalog_tf(kv, section, prefix));
        }
        auto maybe_fronts = [&]() {
            const std::string first =
                spec.channels == 1 ? "front.num" : "front.0.num";
            if (!kv.find(section, first)) return;
            for (int c = 0; c < spec.channels; ++c) {
                const std::string prefix =
                    spec.channels == 1 ? "front" : "front." + std::to_string(c);
                spec.fronts.push_back(read_catalog_tf(kv, section, prefix));
            }
        };
        maybe_fronts();
        if (const std::string* v = kv.find(section, "mix.0")) {
            spec.mix.resize(spec.outputs, spec.channels);
            for (int o = 0; o < spec.outputs; ++o) {
                const std::vector<double> row = textio::parse_double_list(
                    kv.require(section, "mix." + std::to_string(o)), section + ": mix");
                if (static_cast<int>(row.size()) != spec.channels) {
                    throw ParseError(path.string() + ": [" + section +
                                     "] mix row length must equal channels");
                }
                for (int c = 0; c < spec.channels; ++c) {
                    spec.mix(o, c) = row[static_cast<std::size_t>(c)];
                }
            }
            (void)v;
        }
        for (int o = 0; o < spec.outputs; ++o) {
            const std::string gp = spec.outputs == 1 ? "g" : "g." + std::to_string(o);
            if (kv.find(section, gp + ".c1")) {
                ExpSaturation g;
                g.c1 = textio::parse_finite_double(kv.require(section, gp + ".c1"), gp);
                g.c2 = textio::parse_finite_double(kv.require(section, gp + ".c2"), gp);
                spec.nonlins.push_back(g);
            } else {
                spec.nonlins.push_back(std::nullopt);
            }
            const std::string bp = spec.outputs == 1 ? "back" : "back." + std::to_string(o);
            if (kv.find(section, bp + ".num")) {
                spec.backs.push_back(read_catalog_tf(kv, section, bp));
            } else {
                spec.backs.push_back(std::nullopt);
            }
        }
        if (const std::string* v = kv.find(section, "output_names")) {
            for (const std::string& s : textio::split(*v, ',')) {
                spec.output_names.push_back(textio::trim(s));
            }
        }
        spec.validate();
        catalog.plants.push_back(std::move(spec));
    }
    if (catalog.plants.empty()) {
        throw ParseError(path.string() + ": catalog lists no plants");
    }
    return catalog;
}

}  // namespace blockid
