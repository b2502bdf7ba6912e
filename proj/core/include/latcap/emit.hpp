#pragma once

#include <string>
#include <vector>

#include "latcap/experiments.hpp"
#include "latcap/spectral.hpp"

namespace latcap {

// Writes via a temp file + rename; an interrupted run never leaves a partial
// file at the final path.
void atomic_write_file(const std::string& path, const std::string& contents);

std::string format_double(double v);           // shortest round-trip-stable form
std::string csv_escape(const std::string& s);  // RFC-style quoting

// Replica-level CSV:
// kind,d,shape,N,driver,regime_parameter,replica,value,cap_method,seed,wall_time_ms
std::string sweep_csv(const SweepRecord& rec);
std::string ratio_csv(const RatioResult& res);

// Per-grid-point mean/stderr summary.
std::string sweep_json(const SweepRecord& rec);

// Regime (log axis) vs mean with error bars, one polyline per N.
std::string sweep_svg(const SweepRecord& rec);

std::string lln_csv(const CapacityLlnResult& res, std::uint64_t seed);
std::string lln_json(const CapacityLlnResult& res, std::uint64_t seed);

// Profile export: point coords, e, ebar.
std::string profile_csv(const EquilibriumProfile& prof);

// Trace export: sorted coordinates.
std::string points_csv(const std::vector<Point>& pts, int d);

// Eigenvector export: point coords, phi.
std::string eigen_csv(const EigenPair& pair);

}  // namespace latcap
