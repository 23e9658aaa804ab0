#include "rowsparse/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace rowsparse {

namespace {

using nlohmann::json;

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) io_fail(path, "cannot open for writing");
    out << text;
    if (!out) io_fail(path, "write failed");
}

// 17 significant digits: enough for exact double round-trip, locale-free.
std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{}) throw std::invalid_argument("malformed number");
    for (const char* p = res.ptr; p != last; ++p) {
        if (*p != ' ' && *p != '\t' && *p != '\r') throw std::invalid_argument("malformed number");
    }
    return v;
}

const char* family_name(NoiseFamily family) {
    switch (family) {
        case NoiseFamily::gaussian: return "gaussian";
        case NoiseFamily::rademacher: return "rademacher";
        case NoiseFamily::uniform: return "uniform";
    }
    throw std::logic_error("unreachable noise family");
}

NoiseFamily family_from_name(const std::string& name) {
    if (name == "gaussian") return NoiseFamily::gaussian;
    if (name == "rademacher") return NoiseFamily::rademacher;
    if (name == "uniform") return NoiseFamily::uniform;
    throw std::invalid_argument("unknown noise family: " + name);
}

json noise_to_json_obj(const NoiseSpec& spec) {
    json j{{"family", family_name(spec.family)}, {"param", spec.param}, {"seed", spec.seed}};
    if (spec.k_override) j["K"] = *spec.k_override;
    return j;
}

NoiseSpec noise_from_json_obj(const json& j) {
    NoiseSpec spec;
    spec.family = family_from_name(j.at("family").get<std::string>());
    spec.param = j.at("param").get<double>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("K")) spec.k_override = j.at("K").get<double>();
    return spec;
}

json risk_to_json(const RiskReport& r) {
    return json{{"mean", r.mean},   {"std_error", r.std_error},
                {"q05", r.q05},     {"q95", r.q95},
                {"min", r.min},     {"max", r.max},
                {"trials", r.trials}, {"elapsed_seconds", r.elapsed_seconds}};
}

}  // namespace

RealMatrix read_matrix_csv(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::vector<double> entries;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t cols = 0;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            const std::string_view cell(line.data() + pos,
                                        (comma == std::string::npos ? line.size() : comma) - pos);
            try {
                entries.push_back(parse_double(cell));
            } catch (const std::exception&) {
                io_fail(path, "malformed CSV cell '" + std::string(cell) + "'");
            }
            ++cols;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (n1 == 0) {
            n2 = cols;
        } else if (cols != n2) {
            io_fail(path, "ragged CSV rows");
        }
        ++n1;
    }
    if (n1 == 0) io_fail(path, "empty matrix file");
    try {
        return RealMatrix(n1, n2, std::move(entries));
    } catch (const std::exception& e) {
        io_fail(path, e.what());
    }
}

void write_matrix_csv(const RealMatrix& m, const std::filesystem::path& path) {
    std::string text;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) text += ',';
            text += format_double(m(i, j));
        }
        text += '\n';
    }
    write_file(path, text);
}

RealMatrix read_matrix_json(const std::filesystem::path& path) {
    try {
        const json j = json::parse(read_file(path));
        return RealMatrix(j.at("n1").get<std::size_t>(), j.at("n2").get<std::size_t>(),
                          j.at("entries").get<std::vector<double>>());
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception& e) {
        io_fail(path, e.what());
    }
}

void write_matrix_json(const RealMatrix& m, const std::filesystem::path& path) {
    const json j{{"n1", m.rows()},
                 {"n2", m.cols()},
                 {"entries", std::vector<double>(m.entries().begin(), m.entries().end())}};
    write_file(path, j.dump(2) + "\n");
}

std::string noise_to_json(const NoiseSpec& spec) { return noise_to_json_obj(spec).dump(2); }

NoiseSpec noise_from_json(const std::string& text) {
    return noise_from_json_obj(json::parse(text));
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json grid = json::array();
    for (const auto& g : cfg.grid) {
        grid.push_back(json{{"n1", g.n1}, {"n2", g.n2}, {"s", g.s}});
    }
    const json j{{"grid", grid},
                 {"noise", noise_to_json_obj(cfg.noise)},
                 {"penalty", json{{"lambda", cfg.penalty.lambda},
                                  {"a", cfg.penalty.a},
                                  {"K0", cfg.penalty.K0}}},
                 {"p", cfg.p},
                 {"trials", cfg.trials},
                 {"base_seed", cfg.base_seed},
                 {"gamma", cfg.gamma},
                 {"threads", cfg.threads}};
    return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig cfg;
    for (const auto& g : j.at("grid")) {
        cfg.grid.push_back({g.at("n1").get<std::size_t>(), g.at("n2").get<std::size_t>(),
                            g.at("s").get<std::size_t>()});
    }
    cfg.noise = noise_from_json_obj(j.at("noise"));
    const auto& pen = j.at("penalty");
    cfg.penalty = PenaltyConfig(pen.at("lambda").get<double>(),
                                pen.value("a", 2.0), pen.value("K0", 1.0));
    cfg.p = j.value("p", 2.0);
    cfg.trials = j.at("trials").get<std::size_t>();
    cfg.base_seed = j.value("base_seed", std::uint64_t{0});
    cfg.gamma = j.value("gamma", 0.5);
    cfg.threads = j.value("threads", 1u);
    return cfg;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
    try {
        return config_from_json(read_file(path));
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception& e) {
        io_fail(path, e.what());
    }
}

void write_pack_json(const PackingSet& pack, const PackCertificate& cert,
                     const std::filesystem::path& path) {
    const char* construction = nullptr;
    switch (pack.construction) {
        case PackConstruction::greedy: construction = "greedy"; break;
        case PackConstruction::replicate_embed: construction = "replicate"; break;
        case PackConstruction::pad_ones_embed: construction = "pad"; break;
    }
    json patterns = json::array();
    for (const auto& p : pack.patterns) {
        json rows = json::array();
        for (std::size_t i = 0; i < p.n1; ++i) {
            rows.push_back(std::vector<std::uint32_t>(p.row(i).begin(), p.row(i).end()));
        }
        patterns.push_back(rows);
    }
    const json j{{"n1", pack.n1},
                 {"n2", pack.n2},
                 {"s", pack.s},
                 {"construction", construction},
                 {"d_min_required", pack.d_min_required},
                 {"d_min_achieved", pack.d_min_achieved},
                 {"log_cardinality", pack.log_cardinality},
                 {"patterns", patterns},
                 {"certificate",
                  json{{"pairs", cert.pairs},
                       {"d_min_achieved", cert.d_min_achieved},
                       {"d_min_required", cert.d_min_required},
                       {"required_pass", cert.required_pass},
                       {"distance_floor", cert.distance_floor},
                       {"distance_pass", cert.distance_pass},
                       {"log_cardinality", cert.log_cardinality},
                       {"cardinality_target", cert.cardinality_target},
                       {"cardinality_pass", cert.cardinality_pass}}}};
    write_file(path, j.dump(2) + "\n");
}

PackingSet read_pack_json(const std::filesystem::path& path) {
    try {
        const json j = json::parse(read_file(path));
        PackingSet pack;
        pack.n1 = j.at("n1").get<std::size_t>();
        pack.n2 = j.at("n2").get<std::size_t>();
        pack.s = j.at("s").get<std::size_t>();
        const auto name = j.at("construction").get<std::string>();
        if (name == "greedy") pack.construction = PackConstruction::greedy;
        else if (name == "replicate") pack.construction = PackConstruction::replicate_embed;
        else if (name == "pad") pack.construction = PackConstruction::pad_ones_embed;
        else throw std::invalid_argument("unknown construction: " + name);
        pack.d_min_required = j.at("d_min_required").get<std::size_t>();
        pack.d_min_achieved = j.at("d_min_achieved").get<std::size_t>();
        pack.log_cardinality = j.at("log_cardinality").get<double>();
        for (const auto& rows : j.at("patterns")) {
            BinaryPattern p{pack.n1, pack.n2, pack.s, {}};
            for (const auto& row : rows) {
                const auto cols = row.get<std::vector<std::uint32_t>>();
                if (cols.size() != pack.s) throw std::invalid_argument("row weight mismatch");
                p.cols.insert(p.cols.end(), cols.begin(), cols.end());
            }
            if (p.cols.size() != pack.n1 * pack.s) {
                throw std::invalid_argument("pattern row count mismatch");
            }
            pack.patterns.push_back(std::move(p));
        }
        return pack;
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception& e) {
        io_fail(path, e.what());
    }
}

void emit(const SweepResult& results, EmitFormat format,
          const std::filesystem::path& path) {
    if (results.points.empty()) throw std::invalid_argument("emit requires nonempty results");

    if (format == EmitFormat::csv) {
        std::string text =
            "grid_index,n1,n2,s,rate,trials,mean,std_error,q05,q95,min,max,elapsed_seconds\n";
        for (std::size_t i = 0; i < results.points.size(); ++i) {
            const auto& p = results.points[i];
            text += std::to_string(i) + ',' + std::to_string(p.dims.n1) + ',' +
                    std::to_string(p.dims.n2) + ',' + std::to_string(p.dims.s) + ',' +
                    format_double(p.rate) + ',' + std::to_string(p.risk.trials) + ',' +
                    format_double(p.risk.mean) + ',' + format_double(p.risk.std_error) + ',' +
                    format_double(p.risk.q05) + ',' + format_double(p.risk.q95) + ',' +
                    format_double(p.risk.min) + ',' + format_double(p.risk.max) + ',' +
                    format_double(p.risk.elapsed_seconds) + '\n';
        }
        write_file(path, text);
        return;
    }

    if (format == EmitFormat::json) {
        json points = json::array();
        for (const auto& p : results.points) {
            points.push_back(json{{"dims", json{{"n1", p.dims.n1}, {"n2", p.dims.n2}, {"s", p.dims.s}}},
                                  {"rate", p.rate},
                                  {"risk", risk_to_json(p.risk)}});
        }
        json j{{"points", points}};
        if (results.fit) {
            j["fit"] = json{{"slope", results.fit->slope},
                            {"intercept", results.fit->intercept},
                            {"r_squared", results.fit->r_squared},
                            {"fitted_constant", results.fit->fitted_constant}};
        }
        write_file(path, j.dump(2) + "\n");
        return;
    }

    // SVG: log-log scatter, one <path> per fitted line.
    const double width = 640.0, height = 480.0, margin = 56.0;
    double lx_min = 0.0, lx_max = 0.0, ly_min = 0.0, ly_max = 0.0;
    bool first = true;
    for (const auto& p : results.points) {
        if (!(p.rate > 0.0) || !(p.risk.mean > 0.0)) {
            throw std::invalid_argument("svg emission needs positive rates and risks");
        }
        const double lx = std::log10(p.rate);
        const double ly = std::log10(p.risk.mean);
        if (first) {
            lx_min = lx_max = lx;
            ly_min = ly_max = ly;
            first = false;
        } else {
            lx_min = std::min(lx_min, lx); lx_max = std::max(lx_max, lx);
            ly_min = std::min(ly_min, ly); ly_max = std::max(ly_max, ly);
        }
    }
    if (lx_max == lx_min) { lx_min -= 0.5; lx_max += 0.5; }
    if (ly_max == ly_min) { ly_min -= 0.5; ly_max += 0.5; }
    const auto sx = [&](double lx) {
        return margin + (lx - lx_min) / (lx_max - lx_min) * (width - 2.0 * margin);
    };
    const auto sy = [&](double ly) {
        return height - margin - (ly - ly_min) / (ly_max - ly_min) * (height - 2.0 * margin);
    };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
                      "viewBox=\"0 0 640 480\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
    svg += "<text x=\"320\" y=\"470\" text-anchor=\"middle\" font-size=\"13\">log10 rate</text>\n";
    svg += "<text x=\"16\" y=\"240\" text-anchor=\"middle\" font-size=\"13\" "
           "transform=\"rotate(-90 16 240)\">log10 mean risk</text>\n";
    for (const auto& p : results.points) {
        svg += "<circle cx=\"" + format_double(sx(std::log10(p.rate))) + "\" cy=\"" +
               format_double(sy(std::log10(p.risk.mean))) + "\" r=\"4\" fill=\"#1f6fb2\"/>\n";
    }
    if (results.fit) {
        const double ln10 = std::log(10.0);
        // fitted line in natural-log space: ly = (slope*lx*ln10 + intercept)/ln10
        const auto fit_ly = [&](double lx) {
            return (results.fit->slope * lx * ln10 + results.fit->intercept) / ln10;
        };
        svg += "<path d=\"M " + format_double(sx(lx_min)) + ' ' + format_double(sy(fit_ly(lx_min))) +
               " L " + format_double(sx(lx_max)) + ' ' + format_double(sy(fit_ly(lx_max))) +
               "\" stroke=\"#c23b22\" stroke-width=\"1.5\" fill=\"none\"/>\n";
    }
    svg += "</svg>\n";
    write_file(path, svg);
}

}  // namespace rowsparse
