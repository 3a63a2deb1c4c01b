// SPDX-License-Identifier: Apache-2.0
#include "nclaplace/report.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "nclaplace/errors.hpp"

namespace nclap {

using nlohmann::ordered_json;

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

ordered_json config_json(const SpectrumReport& r) {
  ordered_json c;
  c["surface"] = r.surface;
  c["semi_axes"] = {r.semi_axes.a1, r.semi_axes.a2, r.semi_axes.a3};
  c["N"] = r.N;
  c["beta"] = r.beta;
  c["hbar"] = r.hbar;
  c["grid_offset"] = to_string(r.grid_offset);
  c["epsilon"] = r.epsilon;
  c["strategy"] = to_string(r.strategy);
  c["count"] = r.requested;
  c["K"] = r.max_offset;
  c["tolerance"] = r.tolerance;
  c["cluster_gap"] = r.cluster_gap;
  return c;
}

std::string config_comments(const SpectrumReport& r) {
  std::ostringstream os;
  os << "# surface=" << r.surface << " semi_axes=" << format_number(r.semi_axes.a1) << ','
     << format_number(r.semi_axes.a2) << ',' << format_number(r.semi_axes.a3) << '\n';
  os << "# N=" << r.N << " beta=" << format_number(r.beta) << " hbar=" << format_number(r.hbar)
     << " grid_offset=" << to_string(r.grid_offset) << " epsilon=" << format_number(r.epsilon) << '\n';
  os << "# strategy=" << to_string(r.strategy) << " count=" << r.requested << " K=" << r.max_offset
     << " tolerance=" << format_number(r.tolerance) << " cluster_gap=" << format_number(r.cluster_gap) << '\n';
  os << "# converged=" << (r.converged ? 1 : 0) << " imaginary_leakage=" << format_number(r.imaginary_leakage)
     << " truncated_modes=" << r.truncated_modes << '\n';
  return os.str();
}

ordered_json parse(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string spectrum_json(const SpectrumReport& r) {
  ordered_json j;
  j["surface"] = r.surface;
  j["N"] = r.N;
  j["beta"] = r.beta;
  j["hbar"] = r.hbar;
  j["strategy"] = to_string(r.strategy);
  j["converged"] = r.converged;
  j["imaginary_leakage"] = r.imaginary_leakage;
  j["truncated_modes"] = r.truncated_modes;
  ordered_json eig = ordered_json::array();
  for (const auto& e : r.eigenpairs) {
    ordered_json x;
    x["value"] = e.value;
    x["imag"] = e.imag;
    x["residual"] = e.residual;
    x["block"] = e.block;
    x["cluster"] = e.cluster;
    x["converged"] = e.converged;
    x["imaginary_flag"] = e.imaginary_flag;
    eig.push_back(x);
  }
  j["eigenvalues"] = eig;
  ordered_json cl = ordered_json::array();
  for (const auto& c : r.clusters) cl.push_back({{"mean", c.mean}, {"multiplicity", c.multiplicity}});
  j["clusters"] = cl;
  j["config"] = config_json(r);
  return j.dump(2) + "\n";
}

std::string spectrum_csv(const SpectrumReport& r) {
  std::ostringstream os;
  os << config_comments(r);
  os << "index,value,imag,residual,block,cluster,converged,imaginary_flag\n";
  for (std::size_t i = 0; i < r.eigenpairs.size(); ++i) {
    const auto& e = r.eigenpairs[i];
    os << i << ',' << format_number(e.value) << ',' << format_number(e.imag) << ',' << format_number(e.residual) << ','
       << e.block << ',' << e.cluster << ',' << (e.converged ? 1 : 0) << ',' << (e.imaginary_flag ? 1 : 0) << '\n';
  }
  return os.str();
}

SpectrumReport spectrum_from_json(const std::string& text) {
  const ordered_json j = parse(text);
  SpectrumReport r;
  try {
    const auto& c = j.at("config");
    r.surface = j.at("surface").get<std::string>();
    const auto axes = c.at("semi_axes").get<std::vector<double>>();
    if (axes.size() == 3) r.semi_axes = {axes[0], axes[1], axes[2]};
    r.N = j.at("N").get<int>();
    r.beta = j.at("beta").get<double>();
    r.hbar = j.at("hbar").get<double>();
    r.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    r.converged = j.value("converged", true);
    r.imaginary_leakage = j.value("imaginary_leakage", 0.0);
    r.truncated_modes = j.value("truncated_modes", 0);
    r.grid_offset = grid_offset_from_string(c.at("grid_offset").get<std::string>());
    r.epsilon = c.at("epsilon").get<double>();
    r.requested = c.at("count").get<int>();
    r.max_offset = c.at("K").get<int>();
    r.tolerance = c.at("tolerance").get<double>();
    r.cluster_gap = c.at("cluster_gap").get<double>();
    for (const auto& x : j.at("eigenvalues")) {
      Eigenpair e;
      e.value = x.at("value").get<double>();
      e.imag = x.value("imag", 0.0);
      e.residual = x.at("residual").get<double>();
      e.block = x.at("block").get<int>();
      e.cluster = x.at("cluster").get<int>();
      e.converged = x.value("converged", true);
      e.imaginary_flag = x.value("imaginary_flag", false);
      r.eigenpairs.push_back(e);
    }
    for (const auto& x : j.at("clusters")) r.clusters.push_back({x.at("mean").get<double>(), x.at("multiplicity").get<int>()});
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed spectrum report: ") + e.what());
  }
  return r;
}

std::string classical_json(const ClassicalSpectrum& c) {
  ordered_json j;
  j["surface"] = c.surface;
  j["grid_points"] = c.grid_points;
  j["m_max"] = c.m_max;
  j["richardson_grids"] = c.richardson_grids;
  ordered_json eig = ordered_json::array();
  for (const auto& e : c.entries) {
    ordered_json x;
    x["value"] = e.eigenvalue;
    x["multiplicity"] = e.multiplicity;
    x["source"] = to_string(e.source);
    x["mode"] = e.mode;
    x["error_estimate"] = e.error_estimate;
    eig.push_back(x);
  }
  j["eigenvalues"] = eig;
  ordered_json cl = ordered_json::array();
  for (const auto& r : c.clusters()) cl.push_back({{"mean", r.value}, {"multiplicity", r.multiplicity}});
  j["clusters"] = cl;
  return j.dump(2) + "\n";
}

std::string classical_csv(const ClassicalSpectrum& c) {
  std::ostringstream os;
  os << "# surface=" << c.surface << " grid_points=" << c.grid_points << " m_max=" << c.m_max << '\n';
  os << "index,value,multiplicity,source,mode,error_estimate\n";
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    const auto& e = c.entries[i];
    os << i << ',' << format_number(e.eigenvalue) << ',' << e.multiplicity << ',' << to_string(e.source) << ','
       << e.mode << ',' << format_number(e.error_estimate) << '\n';
  }
  return os.str();
}

std::string convergence_csv(const ConvergenceTable& t) {
  std::ostringstream os;
  if (!t.reports.empty()) {
    const auto& r = t.reports.front();
    os << "# surface=" << r.surface << " beta=" << format_number(r.beta) << " strategy=" << to_string(r.strategy)
       << " grid_offset=" << to_string(r.grid_offset) << " count=" << r.requested << '\n';
  }
  os << "N,hbar,cluster,lambda,reference,abs_error,fitted_order\n";
  for (const auto& row : t.rows) {
    os << row.N << ',' << format_number(row.hbar) << ',' << row.cluster << ',' << format_number(row.lambda) << ','
       << format_number(row.reference) << ',' << format_number(row.abs_error) << ','
       << (row.fitted_order ? format_number(*row.fitted_order) : std::string()) << '\n';
  }
  return os.str();
}

std::map<int, std::string> convergence_plot_data(const ConvergenceTable& t) {
  std::map<int, std::string> out;
  for (const auto& row : t.rows) {
    auto& s = out[row.cluster];
    if (s.empty())
      s = "# cluster " + std::to_string(row.cluster) + " reference " + format_number(row.reference) +
          "\n# plot 'file' using 1:2 with linespoints; set logscale xy\n# N abs_error\n";
    s += std::to_string(row.N) + ' ' + format_number(row.abs_error) + '\n';
  }
  return out;
}

std::string axioms_csv(const AxiomTable& t) {
  std::ostringstream os;
  os << "# surface=" << t.surface << " grid_offset=" << to_string(t.offset)
     << " beta=" << (t.beta ? format_number(*t.beta) : std::string("auto")) << '\n';
  os << "# trace rows: product_defect = 2 pi hbar Tr T_N(1), bracket_defect = area, norm_bound = |difference|\n";
  os << "N,pair,product_defect,bracket_defect,norm_bound\n";
  std::size_t tr = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    os << r.N << ",\"" << r.pair << "\"," << format_number(r.defects.product_defect) << ','
       << format_number(r.defects.bracket_defect) << ',' << format_number(r.norm_bound) << '\n';
    const bool last_of_N = i + 1 == t.rows.size() || t.rows[i + 1].N != r.N;
    if (last_of_N && tr < t.trace_rows.size()) {
      const auto& c = t.trace_rows[tr++];
      os << c.N << ",trace," << format_number(c.trace) << ',' << format_number(c.integral) << ','
         << format_number(c.abs_error) << '\n';
    }
  }
  return os.str();
}

std::string trace_json(const TraceCheck& t) {
  ordered_json j;
  j["function"] = t.function;
  j["N"] = t.N;
  j["beta"] = t.beta;
  j["hbar"] = t.hbar;
  j["trace"] = t.trace;
  j["integral"] = t.integral;
  j["area_integral"] = t.area_integral;
  j["abs_error"] = t.abs_error;
  return j.dump(2) + "\n";
}

namespace {

constexpr std::uint32_t kMatrixVersion = 1;

template <typename T>
void put_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(const unsigned char* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
  return v;
}

void put_double(std::string& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof bits);
  put_le(out, bits);
}

double get_double(const unsigned char* p) {
  const std::uint64_t bits = get_le<std::uint64_t>(p);
  double d;
  std::memcpy(&d, &bits, sizeof d);
  return d;
}

}  // namespace

void write_matrix_binary(const std::string& path, const CMatrix& M) {
  if (M.rows() != M.cols()) throw ArgumentError("matrix files hold square matrices");
  std::string buf = "NCLQ";
  put_le<std::uint32_t>(buf, kMatrixVersion);
  put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(M.rows()));
  put_le<std::uint32_t>(buf, 0);
  buf.append(12, '\0');
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      put_double(buf, M(i, j).real());
      put_double(buf, M(i, j).imag());
    }
  }
  write_text(path, buf);
}

CMatrix read_matrix_binary(const std::string& path) {
  const std::string buf = read_text(path);
  if (buf.size() < 32 || buf.compare(0, 4, "NCLQ") != 0) throw IoError("'" + path + "' is not a matrix file");
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  const auto version = get_le<std::uint32_t>(p + 4);
  if (version != kMatrixVersion) throw IoError("unsupported matrix file version " + std::to_string(version));
  const auto n = get_le<std::uint64_t>(p + 8);
  if (n > (1u << 20) || buf.size() != 32 + n * n * 16) throw IoError("matrix file '" + path + "' is truncated");
  CMatrix M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const unsigned char* q = p + 32;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j, q += 16) M(i, j) = {get_double(q), get_double(q + 8)};
  return M;
}

std::string matrix_json(const CMatrix& M) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back({M(i, j).real(), M(i, j).imag()});
    rows.push_back(row);
  }
  return rows.dump() + "\n";
}

CMatrix matrix_from_json(const std::string& text) {
  const ordered_json j = parse(text);
  if (!j.is_array()) throw IoError("matrix JSON must be an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  CMatrix M(n, n);
  try {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = j[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw IoError("matrix JSON must be square");
      for (Eigen::Index k = 0; k < n; ++k) {
        const auto& e = row[static_cast<std::size_t>(k)];
        M(i, k) = {e.at(0).get<double>(), e.at(1).get<double>()};
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed matrix JSON: ") + e.what());
  }
  return M;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace nclap
