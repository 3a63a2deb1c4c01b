// SPDX-License-Identifier: Apache-2.0
//
// Serialization of reports and matrices. CSV numbers use 15 significant
// digits; every report carries its resolved configuration.
#pragma once

#include <map>
#include <string>

#include "nclaplace/experiments.hpp"

namespace nclap {

std::string format_number(double v);

std::string spectrum_json(const SpectrumReport& r);
std::string spectrum_csv(const SpectrumReport& r);
SpectrumReport spectrum_from_json(const std::string& text);

std::string classical_json(const ClassicalSpectrum& c);
std::string classical_csv(const ClassicalSpectrum& c);

/// Columns N, hbar, cluster, lambda, reference, abs_error, fitted_order.
std::string convergence_csv(const ConvergenceTable& t);
/// One two-column (N, abs_error) data file per cluster, keyed by cluster.
std::map<int, std::string> convergence_plot_data(const ConvergenceTable& t);

/// Columns N, pair, product_defect, bracket_defect, norm_bound; the trace
/// rows use pair "trace" with the trace and area in the defect columns.
std::string axioms_csv(const AxiomTable& t);

std::string trace_json(const TraceCheck& t);

/// Binary layout: "NCLQ", u32 version, u64 rows, u32 flags, 12 reserved
/// bytes, then rows*cols row-major complex doubles (re, im), little endian.
/// Square matrices only.
void write_matrix_binary(const std::string& path, const CMatrix& M);
CMatrix read_matrix_binary(const std::string& path);
/// Nested [[ [re, im], ... ], ...] rows.
std::string matrix_json(const CMatrix& M);
CMatrix matrix_from_json(const std::string& text);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace nclap
