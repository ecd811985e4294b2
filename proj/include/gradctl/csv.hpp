#pragma once

#include "gradctl/gradient_sweep.hpp"
#include "gradctl/rollout.hpp"
#include "gradctl/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace gradctl::csv {

// Shortest round-trip decimal form; "inf"/"nan" spelled out. Deterministic,
// so repeated runs produce byte-identical files.
std::string format_double(double v);

void write_matrix(const std::filesystem::path& path, const Matrix& m,
                  const std::string& header = {});
Matrix read_matrix(const std::filesystem::path& path);

// Columns: t, x1..xnx, u1..unu, cumulative_cost.
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);

// Columns: x1..xnx, g1..gnx.
void write_samples(const std::filesystem::path& path, const std::vector<GradientSample>& samples);

void write_weights(const std::filesystem::path& path, const RowVec& w);
RowVec read_weights(const std::filesystem::path& path);

} // namespace gradctl::csv
