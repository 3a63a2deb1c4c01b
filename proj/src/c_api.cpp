// SPDX-License-Identifier: Apache-2.0
#include "nclaplace/nclaplace.h"

#include <cmath>
#include <filesystem>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "nclaplace/errors.hpp"
#include "nclaplace/experiments.hpp"
#include "nclaplace/report.hpp"

struct nclap_surface {
  std::shared_ptr<const nclap::SurfaceDescriptor> s;
};

struct nclap_operator {
  nclap::OperatorPtr ops;
};

struct nclap_spectrum {
  nclap::SpectrumReport report;
};

struct nclap_reference {
  nclap::ClassicalSpectrum spectrum;
};

struct nclap_convergence {
  nclap::ConvergenceTable table;
};

struct nclap_axioms {
  nclap::AxiomTable table;
};

namespace {

thread_local std::string g_last_error;

nclap_status fail(nclap_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename F>
nclap_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const nclap::NotRevolutionError& e) {
    return fail(NCLAP_ERR_NOT_REVOLUTION, e.what());
  } catch (const nclap::ArgumentError& e) {
    return fail(NCLAP_ERR_ARGUMENT, e.what());
  } catch (const nclap::DomainError& e) {
    return fail(NCLAP_ERR_DOMAIN, e.what());
  } catch (const nclap::ConsistencyError& e) {
    return fail(NCLAP_ERR_CONSISTENCY, e.what());
  } catch (const nclap::SingularPointError& e) {
    return fail(NCLAP_ERR_SINGULAR_POINT, e.what());
  } catch (const nclap::DegenerateMetricError& e) {
    return fail(NCLAP_ERR_DEGENERATE_METRIC, e.what());
  } catch (const nclap::ConvergenceError& e) {
    return fail(NCLAP_ERR_CONVERGENCE, e.what());
  } catch (const nclap::ResolutionError& e) {
    return fail(NCLAP_ERR_RESOLUTION, e.what());
  } catch (const nclap::IoError& e) {
    return fail(NCLAP_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(NCLAP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NCLAP_ERR_INTERNAL, e.what());
  }
}

#define NCLAP_REQUIRE(cond, msg) \
  if (!(cond)) return fail(NCLAP_ERR_ARGUMENT, msg)

nclap::GridOffset to_offset(nclap_grid_offset o) {
  switch (o) {
    case NCLAP_GRID_PAPER:
      return nclap::GridOffset::paper;
    case NCLAP_GRID_SYMMETRIC:
      return nclap::GridOffset::symmetric;
  }
  throw nclap::ArgumentError("unknown grid offset");
}

std::optional<double> to_beta(double beta) { return beta > 0.0 ? std::optional<double>(beta) : std::nullopt; }

nclap::SpectrumOptions to_options(const nclap_spectrum_options* opt) {
  nclap::SpectrumOptions o;
  if (!opt) return o;
  switch (opt->strategy) {
    case NCLAP_STRATEGY_AUTO:
      o.strategy = nclap::Strategy::auto_select;
      break;
    case NCLAP_STRATEGY_DENSE:
      o.strategy = nclap::Strategy::dense;
      break;
    case NCLAP_STRATEGY_BLOCKS:
      o.strategy = nclap::Strategy::blocks;
      break;
    case NCLAP_STRATEGY_ITERATIVE:
      o.strategy = nclap::Strategy::iterative;
      break;
    default:
      throw nclap::ArgumentError("unknown strategy");
  }
  o.count = opt->count;
  o.max_offset = opt->max_offset;
  o.tolerance = opt->tolerance;
  o.cluster_gap = opt->cluster_gap;
  o.dense_cap = opt->dense_cap;
  o.max_iterations = opt->max_iterations;
  o.threads = opt->threads;
  return o;
}

nclap_strategy from_strategy(nclap::Strategy s) {
  switch (s) {
    case nclap::Strategy::dense:
      return NCLAP_STRATEGY_DENSE;
    case nclap::Strategy::blocks:
      return NCLAP_STRATEGY_BLOCKS;
    case nclap::Strategy::iterative:
      return NCLAP_STRATEGY_ITERATIVE;
    case nclap::Strategy::auto_select:
      break;
  }
  return NCLAP_STRATEGY_AUTO;
}

void copy_matrix(const nclap::CMatrix& M, double* buf) {
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      buf[k++] = M(i, j).real();
      buf[k++] = M(i, j).imag();
    }
}

nclap::CMatrix read_matrix(const double* buf, int N) {
  nclap::CMatrix M(N, N);
  std::size_t k = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j, k += 2) M(i, j) = {buf[k], buf[k + 1]};
  return M;
}

void write_formats(const std::string& stem, nclap_format format, const std::string& json, const std::string& csv) {
  if (format & NCLAP_FORMAT_JSON) nclap::write_text(stem + ".json", json);
  if (format & NCLAP_FORMAT_CSV) nclap::write_text(stem + ".csv", csv);
}

}  // namespace

extern "C" {

const char* nclap_version(void) { return "1.0.0"; }

const char* nclap_last_error(void) { return g_last_error.c_str(); }

const char* nclap_status_string(nclap_status status) {
  switch (status) {
    case NCLAP_OK:
      return "ok";
    case NCLAP_ERR_ARGUMENT:
      return "invalid argument";
    case NCLAP_ERR_DOMAIN:
      return "outside the parameter domain";
    case NCLAP_ERR_CONSISTENCY:
      return "consistency check failed";
    case NCLAP_ERR_SINGULAR_POINT:
      return "singular point";
    case NCLAP_ERR_NOT_REVOLUTION:
      return "not a surface of revolution";
    case NCLAP_ERR_DEGENERATE_METRIC:
      return "degenerate metric";
    case NCLAP_ERR_CONVERGENCE:
      return "solver did not converge";
    case NCLAP_ERR_RESOLUTION:
      return "insufficient resolution";
    case NCLAP_ERR_IO:
      return "i/o error";
    case NCLAP_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

nclap_status nclap_surface_create(const char* kind, const double* axes, size_t n_axes, nclap_surface** out) {
  NCLAP_REQUIRE(kind && out, "nclap_surface_create: null argument");
  NCLAP_REQUIRE(n_axes == 0 || axes, "nclap_surface_create: axes pointer is null");
  return guarded([&] {
    std::vector<double> a(axes, axes + n_axes);
    *out = new nclap_surface{std::make_shared<const nclap::SurfaceDescriptor>(nclap::make_surface(kind, a))};
    return NCLAP_OK;
  });
}

nclap_status nclap_surface_load(const char* json_path, nclap_surface** out) {
  NCLAP_REQUIRE(json_path && out, "nclap_surface_load: null argument");
  return guarded([&] {
    *out = new nclap_surface{std::make_shared<const nclap::SurfaceDescriptor>(nclap::load_surface_config(json_path))};
    return NCLAP_OK;
  });
}

void nclap_surface_destroy(nclap_surface* s) { delete s; }

const char* nclap_surface_name(const nclap_surface* s) { return s ? s->s->name().c_str() : ""; }

nclap_status nclap_surface_axes(const nclap_surface* s, double axes[3]) {
  NCLAP_REQUIRE(s && axes, "nclap_surface_axes: null argument");
  const auto& a = s->s->semi_axes();
  axes[0] = a.a1;
  axes[1] = a.a2;
  axes[2] = a.a3;
  return NCLAP_OK;
}

int nclap_surface_is_revolution(const nclap_surface* s) { return s && s->s->is_revolution() ? 1 : 0; }

nclap_status nclap_surface_interval(const nclap_surface* s, double* lo, double* hi) {
  NCLAP_REQUIRE(s && lo && hi, "nclap_surface_interval: null argument");
  *lo = s->s->interval().lo;
  *hi = s->s->interval().hi;
  return NCLAP_OK;
}

nclap_status nclap_surface_area(const nclap_surface* s, double* area) {
  NCLAP_REQUIRE(s && area, "nclap_surface_area: null argument");
  return guarded([&] {
    const auto q = nclap::surface_area(*s->s);
    if (!q.converged) return fail(NCLAP_ERR_CONVERGENCE, "area quadrature did not converge");
    *area = q.value;
    return NCLAP_OK;
  });
}

nclap_status nclap_default_beta(const nclap_surface* s, double* beta) {
  NCLAP_REQUIRE(s && beta, "nclap_default_beta: null argument");
  return guarded([&] {
    *beta = nclap::default_beta(*s->s);
    return NCLAP_OK;
  });
}

nclap_status nclap_metric_sqrt_det(const nclap_surface* s, double z, double theta, double* value) {
  NCLAP_REQUIRE(s && value, "nclap_metric_sqrt_det: null argument");
  return guarded([&] {
    *value = nclap::metric_sqrt_det(*s->s, nclap::SurfacePoint(z, theta));
    return NCLAP_OK;
  });
}

void nclap_grid_config_default(nclap_grid_config* cfg) {
  if (!cfg) return;
  cfg->N = 100;
  cfg->beta = 0.0;
  cfg->offset = NCLAP_GRID_PAPER;
  cfg->epsilon = 1e-12;
}

nclap_status nclap_operator_create(const nclap_surface* s, const nclap_grid_config* cfg, nclap_operator** out) {
  NCLAP_REQUIRE(s && cfg && out, "nclap_operator_create: null argument");
  return guarded([&] {
    const auto grid = nclap::make_grid(*s->s, cfg->N, to_beta(cfg->beta), to_offset(cfg->offset));
    *out = new nclap_operator{nclap::QuantizedOperatorSet::assemble(s->s, grid, cfg->epsilon)};
    return NCLAP_OK;
  });
}

void nclap_operator_destroy(nclap_operator* op) { delete op; }

int nclap_operator_size(const nclap_operator* op) { return op ? op->ops->size() : 0; }
double nclap_operator_hbar(const nclap_operator* op) { return op ? op->ops->hbar() : 0.0; }
double nclap_operator_beta(const nclap_operator* op) { return op ? op->ops->grid().beta() : 0.0; }
int nclap_operator_truncated_modes(const nclap_operator* op) { return op ? op->ops->truncated_modes() : 0; }

nclap_status nclap_operator_matrix(const nclap_operator* op, int which, double* buf) {
  NCLAP_REQUIRE(op && buf, "nclap_operator_matrix: null argument");
  NCLAP_REQUIRE(which >= 0 && which <= 4, "nclap_operator_matrix: which must lie in 0..4");
  return guarded([&] {
    const auto& o = *op->ops;
    if (which < 3)
      copy_matrix(nclap::CMatrix(o.coords()[which]), buf);
    else if (which == 3)
      copy_matrix(o.gamma().matrix, buf);
    else
      copy_matrix(o.gamma_inv(), buf);
    return NCLAP_OK;
  });
}

nclap_status nclap_operator_apply(const nclap_operator* op, const double* in, double* out) {
  NCLAP_REQUIRE(op && in && out, "nclap_operator_apply: null argument");
  return guarded([&] {
    const int N = op->ops->size();
    copy_matrix(nclap::apply_laplacian(*op->ops, read_matrix(in, N)), out);
    return NCLAP_OK;
  });
}

nclap_status nclap_operator_dump(const nclap_operator* op, const char* dir, nclap_matrix_format format) {
  NCLAP_REQUIRE(op && dir, "nclap_operator_dump: null argument");
  return guarded([&] {
    std::filesystem::create_directories(dir);
    const std::string base(dir);
    const auto& o = *op->ops;
    const std::pair<const char*, nclap::CMatrix> mats[] = {{"X", nclap::CMatrix(o.coords().X)},
                                                           {"Y", nclap::CMatrix(o.coords().Y)},
                                                           {"Z", nclap::CMatrix(o.coords().Z)},
                                                           {"gamma", o.gamma().matrix}};
    for (const auto& [name, M] : mats) {
      if (format & NCLAP_MATRIX_BINARY) nclap::write_matrix_binary(base + "/" + name + ".bin", M);
      if (format & NCLAP_MATRIX_JSON) nclap::write_text(base + "/" + name + ".json", nclap::matrix_json(M));
    }
    return NCLAP_OK;
  });
}

void nclap_spectrum_options_default(nclap_spectrum_options* opt) {
  if (!opt) return;
  const nclap::SpectrumOptions d;
  opt->strategy = NCLAP_STRATEGY_AUTO;
  opt->count = d.count;
  opt->max_offset = d.max_offset;
  opt->tolerance = d.tolerance;
  opt->cluster_gap = d.cluster_gap;
  opt->dense_cap = d.dense_cap;
  opt->max_iterations = d.max_iterations;
  opt->threads = d.threads;
}

nclap_status nclap_spectrum_compute(const nclap_operator* op, const nclap_spectrum_options* opt, nclap_spectrum** out) {
  NCLAP_REQUIRE(op && out, "nclap_spectrum_compute: null argument");
  return guarded([&] {
    auto rep = nclap::spectrum(*op->ops, to_options(opt));
    const bool ok = rep.converged;
    *out = new nclap_spectrum{std::move(rep)};
    if (!ok) return fail(NCLAP_ERR_CONVERGENCE, "some eigenpairs did not reach the residual tolerance");
    return NCLAP_OK;
  });
}

void nclap_spectrum_destroy(nclap_spectrum* sp) { delete sp; }

size_t nclap_spectrum_size(const nclap_spectrum* sp) { return sp ? sp->report.eigenpairs.size() : 0; }

nclap_status nclap_spectrum_get(const nclap_spectrum* sp, size_t i, nclap_eigenpair* out) {
  NCLAP_REQUIRE(sp && out, "nclap_spectrum_get: null argument");
  NCLAP_REQUIRE(i < sp->report.eigenpairs.size(), "nclap_spectrum_get: index out of range");
  const auto& e = sp->report.eigenpairs[i];
  *out = {e.value, e.imag, e.residual, e.block, e.cluster, e.converged ? 1 : 0, e.imaginary_flag ? 1 : 0};
  return NCLAP_OK;
}

size_t nclap_spectrum_cluster_count(const nclap_spectrum* sp) { return sp ? sp->report.clusters.size() : 0; }

nclap_status nclap_spectrum_cluster(const nclap_spectrum* sp, size_t i, double* mean, int* multiplicity) {
  NCLAP_REQUIRE(sp && mean && multiplicity, "nclap_spectrum_cluster: null argument");
  NCLAP_REQUIRE(i < sp->report.clusters.size(), "nclap_spectrum_cluster: index out of range");
  *mean = sp->report.clusters[i].mean;
  *multiplicity = sp->report.clusters[i].multiplicity;
  return NCLAP_OK;
}

nclap_status nclap_spectrum_info_get(const nclap_spectrum* sp, nclap_spectrum_info* out) {
  NCLAP_REQUIRE(sp && out, "nclap_spectrum_info_get: null argument");
  const auto& r = sp->report;
  *out = {r.N,           r.beta,      r.hbar, from_strategy(r.strategy), r.max_offset, r.converged ? 1 : 0,
          r.imaginary_leakage, r.truncated_modes};
  return NCLAP_OK;
}

nclap_status nclap_spectrum_write(const nclap_spectrum* sp, const char* path_stem, nclap_format format) {
  NCLAP_REQUIRE(sp && path_stem, "nclap_spectrum_write: null argument");
  return guarded([&] {
    write_formats(path_stem, format, nclap::spectrum_json(sp->report), nclap::spectrum_csv(sp->report));
    return NCLAP_OK;
  });
}

nclap_status nclap_reference_sphere(int k_max, double radius, nclap_reference** out) {
  NCLAP_REQUIRE(out, "nclap_reference_sphere: null argument");
  return guarded([&] {
    *out = new nclap_reference{nclap::analytic_sphere_spectrum(k_max, radius)};
    return NCLAP_OK;
  });
}

nclap_status nclap_reference_revolution(const nclap_surface* s, int m_max, int grid_points, int count,
                                        nclap_reference** out) {
  NCLAP_REQUIRE(s && out, "nclap_reference_revolution: null argument");
  return guarded([&] {
    *out = new nclap_reference{nclap::revolution_spectrum(*s->s, m_max, grid_points, count)};
    return NCLAP_OK;
  });
}

nclap_status nclap_reference_richardson(const nclap_surface* s, int m_max, int count, nclap_reference** out) {
  NCLAP_REQUIRE(s && out, "nclap_reference_richardson: null argument");
  return guarded([&] {
    *out = new nclap_reference{nclap::richardson_spectrum(*s->s, m_max, count)};
    return NCLAP_OK;
  });
}

nclap_status nclap_reference_auto(const nclap_surface* s, int count, nclap_reference** out) {
  NCLAP_REQUIRE(s && out, "nclap_reference_auto: null argument");
  return guarded([&] {
    *out = new nclap_reference{nclap::reference_spectrum(*s->s, count)};
    return NCLAP_OK;
  });
}

void nclap_reference_destroy(nclap_reference* ref) { delete ref; }

size_t nclap_reference_size(const nclap_reference* ref) { return ref ? ref->spectrum.entries.size() : 0; }

nclap_status nclap_reference_get(const nclap_reference* ref, size_t i, nclap_reference_entry* out) {
  NCLAP_REQUIRE(ref && out, "nclap_reference_get: null argument");
  NCLAP_REQUIRE(i < ref->spectrum.entries.size(), "nclap_reference_get: index out of range");
  const auto& e = ref->spectrum.entries[i];
  *out = {e.eigenvalue, e.multiplicity, e.mode, e.source == nclap::SpectrumSource::analytic ? 1 : 0,
          e.error_estimate};
  return NCLAP_OK;
}

size_t nclap_reference_cluster_count(const nclap_reference* ref, double tol) {
  return ref ? ref->spectrum.clusters(tol).size() : 0;
}

nclap_status nclap_reference_cluster(const nclap_reference* ref, double tol, size_t i, double* value,
                                     int* multiplicity) {
  NCLAP_REQUIRE(ref && value && multiplicity, "nclap_reference_cluster: null argument");
  const auto cl = ref->spectrum.clusters(tol);
  NCLAP_REQUIRE(i < cl.size(), "nclap_reference_cluster: index out of range");
  *value = cl[i].value;
  *multiplicity = cl[i].multiplicity;
  return NCLAP_OK;
}

nclap_status nclap_reference_write(const nclap_reference* ref, const char* path_stem, nclap_format format) {
  NCLAP_REQUIRE(ref && path_stem, "nclap_reference_write: null argument");
  return guarded([&] {
    write_formats(path_stem, format, nclap::classical_json(ref->spectrum), nclap::classical_csv(ref->spectrum));
    return NCLAP_OK;
  });
}

nclap_status nclap_cluster_values(const double* values, size_t n, double gap, double* means, int* multiplicities,
                                  size_t* n_clusters) {
  NCLAP_REQUIRE(n_clusters && (n == 0 || (values && means && multiplicities)), "nclap_cluster_values: null argument");
  return guarded([&] {
    const auto cl = nclap::cluster_multiplicities(std::vector<double>(values, values + n), gap);
    for (std::size_t i = 0; i < cl.size(); ++i) {
      means[i] = cl[i].mean;
      multiplicities[i] = cl[i].multiplicity;
    }
    *n_clusters = cl.size();
    return NCLAP_OK;
  });
}

nclap_status nclap_convergence_run(const nclap_surface* s, const int* Ns, size_t n_N, const nclap_grid_config* cfg,
                                   const nclap_spectrum_options* opt, const nclap_reference* ref,
                                   nclap_convergence** out) {
  NCLAP_REQUIRE(s && Ns && cfg && out, "nclap_convergence_run: null argument");
  return guarded([&] {
    const nclap::SpectrumOptions o = to_options(opt);
    const nclap::ClassicalSpectrum reference = ref ? ref->spectrum : nclap::reference_spectrum(*s->s, o.count);
    auto table = nclap::convergence_study(s->s, std::vector<int>(Ns, Ns + n_N), to_beta(cfg->beta),
                                          to_offset(cfg->offset), o, reference.clusters(1e-6), cfg->epsilon);
    bool ok = true;
    for (const auto& r : table.reports) ok = ok && r.converged;
    *out = new nclap_convergence{std::move(table)};
    if (!ok) return fail(NCLAP_ERR_CONVERGENCE, "some eigenpairs did not reach the residual tolerance");
    return NCLAP_OK;
  });
}

void nclap_convergence_destroy(nclap_convergence* c) { delete c; }

size_t nclap_convergence_size(const nclap_convergence* c) { return c ? c->table.rows.size() : 0; }

nclap_status nclap_convergence_get(const nclap_convergence* c, size_t i, nclap_convergence_row* out) {
  NCLAP_REQUIRE(c && out, "nclap_convergence_get: null argument");
  NCLAP_REQUIRE(i < c->table.rows.size(), "nclap_convergence_get: index out of range");
  const auto& r = c->table.rows[i];
  *out = {r.N,         r.hbar,      r.cluster,
          r.lambda,    r.reference, r.abs_error,
          r.fitted_order ? *r.fitted_order : std::numeric_limits<double>::quiet_NaN()};
  return NCLAP_OK;
}

int nclap_convergence_converged(const nclap_convergence* c) {
  if (!c) return 0;
  for (const auto& r : c->table.reports)
    if (!r.converged) return 0;
  return 1;
}

nclap_status nclap_convergence_write(const nclap_convergence* c, const char* dir) {
  NCLAP_REQUIRE(c && dir, "nclap_convergence_write: null argument");
  return guarded([&] {
    std::filesystem::create_directories(dir);
    const std::string base(dir);
    nclap::write_text(base + "/convergence.csv", nclap::convergence_csv(c->table));
    for (const auto& [k, data] : nclap::convergence_plot_data(c->table))
      nclap::write_text(base + "/cluster_" + std::to_string(k) + ".dat", data);
    return NCLAP_OK;
  });
}

nclap_status nclap_axioms_run(const nclap_surface* s, const int* Ns, size_t n_N, const nclap_grid_config* cfg,
                              nclap_axioms** out) {
  NCLAP_REQUIRE(s && Ns && cfg && out, "nclap_axioms_run: null argument");
  return guarded([&] {
    *out = new nclap_axioms{
        nclap::axiom_table(*s->s, std::vector<int>(Ns, Ns + n_N), to_beta(cfg->beta), to_offset(cfg->offset))};
    return NCLAP_OK;
  });
}

void nclap_axioms_destroy(nclap_axioms* a) { delete a; }

size_t nclap_axioms_size(const nclap_axioms* a) { return a ? a->table.rows.size() : 0; }

nclap_status nclap_axioms_get(const nclap_axioms* a, size_t i, nclap_axiom_row* out) {
  NCLAP_REQUIRE(a && out, "nclap_axioms_get: null argument");
  NCLAP_REQUIRE(i < a->table.rows.size(), "nclap_axioms_get: index out of range");
  const auto& r = a->table.rows[i];
  *out = {r.N, r.i, r.j, r.defects.product_defect, r.defects.bracket_defect, r.norm_bound};
  return NCLAP_OK;
}

size_t nclap_axioms_trace_size(const nclap_axioms* a) { return a ? a->table.trace_rows.size() : 0; }

nclap_status nclap_axioms_trace_get(const nclap_axioms* a, size_t i, nclap_trace_result* out) {
  NCLAP_REQUIRE(a && out, "nclap_axioms_trace_get: null argument");
  NCLAP_REQUIRE(i < a->table.trace_rows.size(), "nclap_axioms_trace_get: index out of range");
  const auto& t = a->table.trace_rows[i];
  *out = {t.N, t.beta, t.hbar, t.trace, t.integral, t.area_integral, t.abs_error};
  return NCLAP_OK;
}

nclap_status nclap_axioms_write(const nclap_axioms* a, const char* csv_path) {
  NCLAP_REQUIRE(a && csv_path, "nclap_axioms_write: null argument");
  return guarded([&] {
    nclap::write_text(csv_path, nclap::axioms_csv(a->table));
    return NCLAP_OK;
  });
}

nclap_status nclap_trace(const nclap_surface* s, const nclap_grid_config* cfg, const char* function,
                         nclap_trace_result* out) {
  NCLAP_REQUIRE(s && cfg && function && out, "nclap_trace: null argument");
  return guarded([&] {
    const auto grid = nclap::make_grid(*s->s, cfg->N, to_beta(cfg->beta), to_offset(cfg->offset));
    const auto t = nclap::trace_check(*s->s, grid, function);
    *out = {t.N, t.beta, t.hbar, t.trace, t.integral, t.area_integral, t.abs_error};
    return NCLAP_OK;
  });
}

}  // extern "C"
