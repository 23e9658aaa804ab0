#pragma once

#include <filesystem>
#include <string>

#include "rowsparse/harness.hpp"
#include "rowsparse/matrix.hpp"
#include "rowsparse/noise.hpp"
#include "rowsparse/packing.hpp"

namespace rowsparse {

// Matrix files. CSV: one matrix row per line, comma-separated decimal reals
// written with 17 significant digits (round-trip exact). JSON:
// {"n1": .., "n2": .., "entries": [row-major]}.
RealMatrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const RealMatrix& m, const std::filesystem::path& path);
RealMatrix read_matrix_json(const std::filesystem::path& path);
void write_matrix_json(const RealMatrix& m, const std::filesystem::path& path);

// NoiseSpec JSON: {"family": "...", "param": x, "seed": n} plus optional "K".
std::string noise_to_json(const NoiseSpec& spec);
NoiseSpec noise_from_json(const std::string& text);

// ExperimentConfig JSON; see README for the schema.
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig read_config(const std::filesystem::path& path);

// Packing set with certificate. Patterns are stored as row-wise column
// index lists.
void write_pack_json(const PackingSet& pack, const PackCertificate& cert,
                     const std::filesystem::path& path);
PackingSet read_pack_json(const std::filesystem::path& path);

// Result emission. CSV columns (in order):
// grid_index,n1,n2,s,rate,trials,mean,std_error,q05,q95,min,max,elapsed_seconds.
// JSON mirrors SweepResult. SVG is a log-log scatter with one fitted-line
// path per fit.
enum class EmitFormat { csv, json, svg };
void emit(const SweepResult& results, EmitFormat format,
          const std::filesystem::path& path);

}  // namespace rowsparse
