#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rmab/estimation.hpp"
#include "rmab/study.hpp"
#include "rmab/types.hpp"

namespace rmab {

// All files are UTF-8 with LF line endings and a mandatory header row.
// Probabilities are written with shortest round-trip formatting so that
// write -> read is lossless and reruns are byte-identical.

inline constexpr const char* kTrajectoryHeader = "arm_id,week,state,action,next_state";
inline constexpr const char* kModelHeader = "arm_id,p00,p10,p01,p11";
inline constexpr const char* kObservedModelHeader =
    "arm_id,p00,p10,p01,p11,imputed_p00,imputed_p10,imputed_p01,imputed_p11";

/// One row per arm per week: the realized (state, action, next_state).
void write_trajectory_csv(const StudyLog& log, std::ostream& out);

/**
 * Parses a trajectory file into per-arm logs ordered by week. Validates the
 * header, field ranges, duplicate (arm, week) rows, and state chaining
 * across contiguous weeks; errors name the column and 1-based row.
 */
std::vector<TrajectoryLog> read_trajectory_csv(std::istream& in);

void write_model_csv(const std::vector<std::pair<ArmId, TransitionModel>>& models,
                     std::ostream& out);

std::vector<std::pair<ArmId, TransitionModel>> read_model_csv(std::istream& in);

/// Observed-model export with per-cell imputation flags.
void write_observed_model_csv(const std::vector<ImputedModel>& models, std::ostream& out);

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

/// Writes content to path via a temporary file and an atomic rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace rmab
