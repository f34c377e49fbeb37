#pragma once

#include <string>

#include "json.hpp"
#include "wavecontrol/analysis.hpp"
#include "wavecontrol/solver.hpp"
#include "wavecontrol/study.hpp"

namespace wavecontrol {

/// Writes with 2-space indent (keys sorted by the json object ordering) and a
/// trailing newline; creates parent directories.
void write_json_file(const std::string& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::string& path);

/// Plain-text mesh exchange. Header line "dim n_vertices n_cells", then one
/// coordinate line per vertex, then one index line per cell (third index -1
/// in 1D). Domain metadata rides in a comment-free second header line.
void write_mesh_text(const std::string& path, const Mesh& mesh);
/// Validates counts, index ranges and the Euler characteristic before
/// rebuilding the derived mesh data.
Mesh read_mesh_text(const std::string& path);

/// Coordinate-format (1-based row col value) text export.
void write_matrix_coordinate(const std::string& path, const SpMat& A);

/// Raw state vector: magic "WCSV1\n", little-endian int64 length, then
/// float64 payload.
void write_state_binary(const std::string& path, const Vector& x);
Vector read_state_binary(const std::string& path);

/// Study table in the declared column order, 12 significant digits.
void write_study_csv(const std::string& path, const StudyResult& result);
/// gnuplot script for the CSV: log2 of each error column against the level.
void write_study_gnuplot(const std::string& path, const std::string& csv_name);

nlohmann::json to_json(const NormReport& r);
nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const InfSupReport& r);
nlohmann::json to_json(const ConsistencyReport& r);
nlohmann::json to_json(const StudyRow& r);

}  // namespace wavecontrol
