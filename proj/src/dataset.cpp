#include "blockid/dataset.hpp"

#include <cmath>
#include <sstream>

#include "blockid/errors.hpp"
#include "blockid/textio.hpp"

namespace blockid {

using textio::format_double;
using textio::split;
using textio::trim;

namespace {

constexpr const char* kSchema = "blockid-dataset v1";

// Header keys written in this fixed order; unknown keys round-trip through
// `extra`.
const char* kKnownKeys[] = {"dt", "role", "inputs", "outputs", "name", "normalized"};

bool is_known_key(const std::string& key) {
    for (const char* k : kKnownKeys) {
        if (key == k) return true;
    }
    return false;
}

}  // namespace

std::string to_string(DatasetRole role) {
    return role == DatasetRole::identification ? "identification" : "validation";
}

DatasetRole dataset_role_from_string(const std::string& text) {
    if (text == "identification") return DatasetRole::identification;
    if (text == "validation") return DatasetRole::validation;
    throw ParseError("unknown dataset role '" + text + "'");
}

void TimeSeriesDataset::validate() const {
    if (sample_period <= 0.0 || !std::isfinite(sample_period)) {
        throw DomainError("dataset '" + name + "': sample period must be > 0");
    }
    const Eigen::Index n = n_samples();
    if (n < 2) {
        throw DomainError("dataset '" + name + "': needs at least 2 samples");
    }
    if (inputs.cols() > 0 && inputs.rows() != n) {
        throw ShapeError("dataset '" + name + "': input rows differ from sample count");
    }
    if (outputs.cols() > 0 && outputs.rows() != n) {
        throw ShapeError("dataset '" + name + "': output rows differ from sample count");
    }
    if (inputs.cols() + outputs.cols() < 1) {
        throw ShapeError("dataset '" + name + "': no channels");
    }
    if (!inputs.allFinite() || !outputs.allFinite()) {
        throw DomainError("dataset '" + name + "': non-finite samples");
    }
    if (!input_names.empty() && static_cast<Eigen::Index>(input_names.size()) != inputs.cols()) {
        throw ShapeError("dataset '" + name + "': input name count mismatch");
    }
    if (!output_names.empty() &&
        static_cast<Eigen::Index>(output_names.size()) != outputs.cols()) {
        throw ShapeError("dataset '" + name + "': output name count mismatch");
    }
}

ResistanceTrace ResistanceTrace::from_samples(std::vector<double> samples) {
    ResistanceTrace trace;
    trace.r0 = samples.empty() ? 0.0 : samples.front();
    trace.samples = std::move(samples);
    return trace;
}

std::vector<double> compute_resistance_change(const ResistanceTrace& trace) {
    if (!(trace.r0 > 0.0) || !std::isfinite(trace.r0)) {
        throw DomainError("resistance trace: R0 must be a finite positive resistance");
    }
    for (double r : trace.samples) {
        if (!std::isfinite(r) || r <= 0.0) {
            throw DomainError("resistance trace: samples must be finite and positive");
        }
    }
    std::vector<double> out;
    out.reserve(trace.samples.size());
    for (double r : trace.samples) {
        out.push_back(100.0 * (r - trace.r0) / trace.r0);
    }
    return out;
}

TimeSeriesDataset normalize_inputs(const TimeSeriesDataset& dataset) {
    if (dataset.normalized) {
        throw DomainError("dataset '" + dataset.name + "' is already normalized");
    }
    TimeSeriesDataset out = dataset;
    out.inputs /= 100.0;
    out.normalized = true;
    return out;
}

TimeSeriesDataset ensure_normalized(const TimeSeriesDataset& dataset) {
    return dataset.normalized ? dataset : normalize_inputs(dataset);
}

void save_dataset(const TimeSeriesDataset& dataset, const std::filesystem::path& path) {
    dataset.validate();
    const Eigen::Index n = dataset.n_samples();
    const Eigen::Index m = dataset.input_channels();
    const Eigen::Index p = dataset.output_channels();

    std::string out;
    out += "# ";
    out += kSchema;
    out += "; dt=" + format_double(dataset.sample_period);
    out += "; role=" + to_string(dataset.role);
    out += "; inputs=" + std::to_string(m);
    out += "; outputs=" + std::to_string(p);
    out += "; name=" + dataset.name;
    out += "; normalized=" + std::string(dataset.normalized ? "1" : "0");
    for (const auto& [key, value] : dataset.extra) {
        out += "; " + key + "=" + value;
    }
    out += "\n";

    std::vector<std::string> columns;
    for (Eigen::Index c = 0; c < m; ++c) {
        columns.push_back(dataset.input_names.empty() ? "u" + std::to_string(c)
                                                      : dataset.input_names[static_cast<std::size_t>(c)]);
    }
    for (Eigen::Index c = 0; c < p; ++c) {
        columns.push_back(dataset.output_names.empty() ? "y" + std::to_string(c)
                                                       : dataset.output_names[static_cast<std::size_t>(c)]);
    }
    out += textio::join(columns, ",") + "\n";

    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<std::string> fields;
        fields.reserve(static_cast<std::size_t>(m + p));
        for (Eigen::Index c = 0; c < m; ++c) fields.push_back(format_double(dataset.inputs(i, c)));
        for (Eigen::Index c = 0; c < p; ++c) fields.push_back(format_double(dataset.outputs(i, c)));
        out += textio::join(fields, ",") + "\n";
    }
    textio::write_file(path, out);
}

TimeSeriesDataset load_dataset(const std::filesystem::path& path) {
    const std::string text = textio::read_file(path);
    std::istringstream in(text);
    std::string line;
    const std::string origin = path.string();

    if (!std::getline(in, line)) {
        throw ParseError(origin + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string header = trim(line);
    if (header.rfind("#", 0) == 0) header = trim(header.substr(1));
    if (header.rfind(kSchema, 0) != 0) {
        throw ParseError(origin + ": missing header '# " + std::string(kSchema) + "'");
    }

    TimeSeriesDataset ds;
    ds.name = path.stem().string();
    long m = -1;
    long p = -1;
    bool have_dt = false;
    bool have_role = false;
    const auto fields = split(header, ';');
    for (std::size_t i = 1; i < fields.size(); ++i) {
        const std::string f = trim(fields[i]);
        if (f.empty()) continue;
        const std::size_t eq = f.find('=');
        if (eq == std::string::npos) {
            throw ParseError(origin + ": malformed header field '" + f + "'");
        }
        const std::string key = trim(f.substr(0, eq));
        const std::string value = trim(f.substr(eq + 1));
        if (key == "dt") {
            ds.sample_period = textio::parse_finite_double(value, origin + ": dt");
            have_dt = true;
        } else if (key == "role") {
            ds.role = dataset_role_from_string(value);
            have_role = true;
        } else if (key == "inputs") {
            m = std::strtol(value.c_str(), nullptr, 10);
        } else if (key == "outputs") {
            p = std::strtol(value.c_str(), nullptr, 10);
        } else if (key == "name") {
            ds.name = value;
        } else if (key == "normalized") {
            ds.normalized = (value == "1" || value == "true");
        } else if (!is_known_key(key)) {
            ds.extra[key] = value;
        }
    }
    if (!have_dt) throw ParseError(origin + ": header missing dt");
    if (!have_role) throw ParseError(origin + ": header missing role");
    if (m < 0) throw ParseError(origin + ": header missing inputs");
    if (p < 0) throw ParseError(origin + ": header missing outputs");

    if (!std::getline(in, line)) {
        throw ParseError(origin + ": missing column-name line");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto columns = split(line, ',');
    if (static_cast<long>(columns.size()) != m + p) {
        throw ParseError(origin + ": expected " + std::to_string(m + p) +
                         " column names, found " + std::to_string(columns.size()));
    }
    for (long c = 0; c < m; ++c) ds.input_names.push_back(trim(columns[static_cast<std::size_t>(c)]));
    for (long c = 0; c < p; ++c) ds.output_names.push_back(trim(columns[static_cast<std::size_t>(m + c)]));

    std::vector<std::vector<double>> rows;
    long rownum = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        ++rownum;
        const auto cells = split(line, ',');
        if (static_cast<long>(cells.size()) != m + p) {
            throw ParseError(origin + ": row " + std::to_string(rownum) + " has " +
                             std::to_string(cells.size()) + " fields, expected " +
                             std::to_string(m + p));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            row.push_back(textio::parse_finite_double(
                cells[c], origin + ": row " + std::to_string(rownum) + ", column " +
                              std::to_string(c + 1)));
        }
        rows.push_back(std::move(row));
    }
    const long n = static_cast<long>(rows.size());
    if (n < 2) {
        throw ParseError(origin + ": needs at least 2 data rows, found " + std::to_string(n));
    }
    ds.inputs.resize(n, m);
    ds.outputs.resize(n, p);
    for (long i = 0; i < n; ++i) {
        for (long c = 0; c < m; ++c) ds.inputs(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
        for (long c = 0; c < p; ++c) ds.outputs(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(m + c)];
    }
    ds.validate();
    return ds;
}

}  // namespace blockid
