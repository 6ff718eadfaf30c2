#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hiermtl/dataset.hpp"
#include "hiermtl/solver.hpp"
#include "hiermtl/synthgen.hpp"
#include "hiermtl/weights.hpp"

namespace hiermtl::io {

// Manifest layout:
//   {"task_kind": "...", "d": D,
//    "attributes": [{"name": "...", "users": [{"name": "...", "csv": "rel/path.csv"}]}]}
// Each CSV has the header "y,f0,...,f{D-1}" and one sample per line. CSV
// paths are resolved relative to the manifest's directory.
MultiTaskDataset load_dataset(const std::filesystem::path& manifest_path);

// Writes manifest.json plus one CSV per subtask into `directory` and returns
// the manifest path. Values use shortest round-trip formatting.
std::filesystem::path write_dataset(const MultiTaskDataset& dataset, const std::filesystem::path& directory);

std::string format_double(double value);
double parse_double(std::string_view text);

nlohmann::json to_json(const WeightDecomposition& weights);
WeightDecomposition weights_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SolverConfig& config);
nlohmann::json to_json(const SolverTrace& trace);
nlohmann::json to_json(const FitResult& result, const SolverConfig& config, bool include_trace);
nlohmann::json to_json(const SynthConfig& config);
nlohmann::json to_json(const GroundTruth& truth);

// Reads the "weights" member of a fit-result or ground-truth document.
WeightDecomposition read_weights(const std::filesystem::path& path);

void write_json(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

// iteration,objective,loss,regularizer,rho,backtracks,momentum,seconds
void write_trace_csv(const SolverTrace& trace, const std::filesystem::path& path);

}  // namespace hiermtl::io
