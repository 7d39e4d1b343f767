#include "frvn/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "frvn/advect.hpp"
#include "frvn/error.hpp"
#include "frvn/mesh.hpp"
#include "frvn/operator.hpp"
#include "frvn/spectrum.hpp"
#include "frvn/temporal.hpp"

namespace frvn {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double to_double(const std::string& token, const std::string& context) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != token.size() || !std::isfinite(value)) {
    throw InvalidInput("bad number '" + token + "' in '" + context + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

struct Job {
  int order = 0;
  std::string family;
  double iota = 0.0;
  double alpha = 1.0;
  double gx = 1.0, gy = 1.0, gz = 1.0;
  double dy = 1.0, dz = 1.0;
  double theta = 0.0, phi = 0.0;  // degrees
  double jitter = 0.0;            // mesh only
};

CorrectionFamily make_family(const std::string& name, int order, double iota) {
  if (name == "dg") return CorrectionFamily::dg(order);
  if (name == "huynh") return CorrectionFamily::huynh(order);
  if (name == "osfr") return CorrectionFamily::osfr(order, iota);
  throw InvalidInput("unknown correction family '" + name + "' (dg|huynh|osfr)");
}

SchemeConfig make_scheme(const SweepSpec& spec, const Job& job) {
  SchemeConfig scheme(make_family(job.family, job.order, job.iota), job.alpha, spec.dim,
                      spec.rule);
  scheme.validate();
  return scheme;
}

StretchedStencil make_stencil(const SweepSpec& spec, const Job& job) {
  StretchedStencil stencil;
  stencil.dim = spec.dim;
  stencil.spacing = {1.0, job.dy, job.dz};
  stencil.expansion = {job.gx, job.gy, job.gz};
  stencil.validate();
  return stencil;
}

std::vector<Job> expand_jobs(const SweepSpec& spec) {
  std::vector<Job> jobs;
  if (spec.command == Command::Mesh) {
    for (double jf : spec.jitter) {
      Job job;
      job.jitter = jf;
      jobs.push_back(job);
    }
    return jobs;
  }
  const bool y = spec.dim >= 2, z = spec.dim >= 3;
  const std::vector<double> one{1.0}, zero{0.0};
  for (int p : spec.orders) {
    for (const std::string& family : spec.families) {
      std::vector<double> iotas;
      if (family == "osfr") {
        iotas = spec.iotas;
      } else {
        iotas = {make_family(family, p, 0.0).iota()};
      }
      for (double iota : iotas) {
        for (double alpha : spec.alphas) {
          for (double gx : spec.gx) {
            for (double gy : y ? spec.gy : one) {
              for (double gz : z ? spec.gz : one) {
                for (double dy : y ? spec.dy_ratio : one) {
                  for (double dz : z ? spec.dz_ratio : one) {
                    for (double theta : y ? spec.theta : zero) {
                      for (double phi : z ? spec.phi : zero) {
                        jobs.push_back({p, family, iota, alpha, gx, gy, gz, dy, dz, theta, phi,
                                        0.0});
                      }
                    }
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  return jobs;
}

std::vector<std::string> columns_for(Command command) {
  if (command == Command::Mesh) {
    return {"jitter", "seed", "nx", "ny", "nz", "mean_qh", "min_qh", "max_qh", "error"};
  }
  std::vector<std::string> cols{"p",  "family",   "iota",     "alpha", "gx",   "gy",
                                "gz", "dy_ratio", "dz_ratio", "theta", "phi"};
  std::vector<std::string> tail;
  switch (command) {
    case Command::Dispersion:
      tail = {"k_hat", "re_omega_hat", "im_omega_hat", "kappa", "ambiguous", "error"};
      break;
    case Command::Condition:
      tail = {"k_hat", "kappa", "residual", "ill_conditioned", "degenerate", "error"};
      break;
    case Command::FullyDiscrete:
      tail = {"k_hat", "rk", "tau", "re_omega_hat_sd", "im_omega_hat_sd", "re_omega_hat_fd",
              "im_omega_hat_fd", "over_dissipated", "error"};
      break;
    case Command::Cfl:
      tail = {"rk", "cfl_limit", "tau_limit", "worst_k_hat", "unstable_at_zero", "error"};
      break;
    case Command::Verify:
      tail = {"k_hat", "k", "tau", "steps", "measured_rate", "predicted_rate",
              "fully_discrete_rate", "relative_error", "result", "error"};
      break;
    case Command::Mesh:
      break;
  }
  cols.insert(cols.end(), tail.begin(), tail.end());
  return cols;
}

std::vector<Cell> lead(const Job& job) {
  return {static_cast<long long>(job.order), job.family, job.iota, job.alpha, job.gx, job.gy,
          job.gz, job.dy, job.dz, job.theta, job.phi};
}

std::vector<double> default_khat(Command command) {
  if (command == Command::Verify) return {1.0};
  return parse_range("0.05:3.1:0.05");
}

struct JobOutput {
  std::vector<std::vector<Cell>> rows;
  std::size_t failed = 0;
  std::size_t failed_checks = 0;
};

// Rows for a job that failed as a whole: one per k_hat (or a single row),
// values missing and the message in the error column.
JobOutput failed_job(const SweepSpec& spec, const Job& job, std::size_t width,
                     const std::vector<double>& khat, const std::string& message) {
  JobOutput out;
  const bool per_k = spec.command != Command::Cfl && spec.command != Command::Mesh;
  const std::size_t count = per_k ? khat.size() : 1;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Cell> row;
    if (spec.command == Command::Mesh) {
      row = {job.jitter, static_cast<long long>(spec.seed)};
    } else {
      row = lead(job);
      if (per_k) row.emplace_back(khat[i]);
    }
    row.resize(width - 1);
    row.emplace_back(message);
    out.rows.push_back(std::move(row));
    ++out.failed;
  }
  return out;
}

JobOutput run_spectral(const SweepSpec& spec, const Job& job,
                       const std::vector<double>& khat) {
  const FrDiscretization disc(make_scheme(spec, job));
  const StretchedStencil stencil = make_stencil(spec, job);
  const WaveProbe angles{0.0, job.theta * kDeg, job.phi * kDeg};
  const double scale = normalization_factor(angles, stencil, job.order);
  std::vector<double> k(khat.size());
  for (std::size_t i = 0; i < khat.size(); ++i) k[i] = khat[i] / scale;
  const ModeSweep sweep = sweep_modes(disc, stencil, angles.theta, angles.phi, k);

  JobOutput out;
  const RkScheme rk = RkScheme::parse(spec.rk);
  for (std::size_t i = 0; i < khat.size(); ++i) {
    const SpectrumResult& s = sweep.spectra[i];
    const int m = sweep.track.index[i];
    std::vector<Cell> row = lead(job);
    row.emplace_back(khat[i]);
    switch (spec.command) {
      case Command::Dispersion: {
        const bool ambiguous = std::find(sweep.track.ambiguous.begin(),
                                         sweep.track.ambiguous.end(),
                                         i) != sweep.track.ambiguous.end();
        const Complex w = s.normalized(m);
        row.insert(row.end(), {w.real(), w.imag(), s.kappa,
                               static_cast<long long>(ambiguous), std::string()});
        break;
      }
      case Command::Condition:
        row.insert(row.end(), {s.kappa, s.residual, static_cast<long long>(s.ill_conditioned),
                               static_cast<long long>(s.degenerate), std::string()});
        break;
      case Command::FullyDiscrete: {
        const FullyDiscreteResult fd =
            fully_discrete_spectrum(disc.symbol(stencil, {k[i], angles.theta, angles.phi}), rk,
                                    spec.tau);
        // fully_discrete_spectrum keeps the mode order of analyze.
        const Complex sd = s.normalized(m);
        const Complex w = fd.spectrum.modes[m] * fd.spectrum.scale;
        const bool over = std::find(fd.over_dissipated.begin(), fd.over_dissipated.end(), m) !=
                          fd.over_dissipated.end();
        row.insert(row.end(), {spec.rk, spec.tau, sd.real(), sd.imag(), w.real(), w.imag(),
                               static_cast<long long>(over), std::string()});
        break;
      }
      default:
        break;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

JobOutput run_cfl(const SweepSpec& spec, const Job& job) {
  const FrDiscretization disc(make_scheme(spec, job));
  const StretchedStencil stencil = make_stencil(spec, job);
  const WaveProbe angles{0.0, job.theta * kDeg, job.phi * kDeg};
  const CflResult r = cfl_limit(disc, stencil, angles, RkScheme::parse(spec.rk));
  std::vector<Cell> row = lead(job);
  row.insert(row.end(), {spec.rk, r.cfl_limit, r.tau_limit,
                         normalize_wavenumber(r.worst_k, angles, stencil, job.order),
                         static_cast<long long>(r.unstable_at_zero), std::string()});
  JobOutput out;
  out.rows.push_back(std::move(row));
  return out;
}

JobOutput run_verify(const SweepSpec& spec, const Job& job, const std::vector<double>& khat) {
  const SchemeConfig scheme = make_scheme(spec, job);
  ModeComparisonOptions options;
  options.cells = spec.cells;
  options.tolerance = spec.tolerance;
  options.rk = RkScheme::parse(spec.rk);
  JobOutput out;
  for (double target : khat) {
    std::vector<Cell> row = lead(job);
    try {
      const ModeComparison c = compare_with_spectrum(scheme, job.theta * kDeg, target, options);
      row.insert(row.end(), {c.k_hat, c.k, c.tau, static_cast<long long>(c.steps),
                             c.measured_rate, c.predicted_rate, c.fully_discrete_rate,
                             c.relative_error, std::string(c.passed ? "PASS" : "FAIL"),
                             std::string()});
      if (!c.passed) ++out.failed_checks;
    } catch (const NumericalError& e) {
      row.emplace_back(target);
      row.resize(columns_for(Command::Verify).size() - 1);
      row.emplace_back(std::string(e.what()));
      ++out.failed;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

JobOutput run_mesh(const SweepSpec& spec, const Job& job) {
  const std::array<int, 3> dims{spec.mesh_dims[0], spec.mesh_dims[1], spec.mesh_dims[2]};
  const JitteredMesh mesh = generate_jittered_mesh(dims, {1.0, 1.0, 1.0}, job.jitter, spec.seed);
  const auto [lo, hi] = std::minmax_element(mesh.quality.begin(), mesh.quality.end());
  JobOutput out;
  out.rows.push_back({job.jitter, static_cast<long long>(spec.seed),
                      static_cast<long long>(dims[0]), static_cast<long long>(dims[1]),
                      static_cast<long long>(dims[2]), mesh.mean_quality(), *lo, *hi,
                      std::string()});
  return out;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  if (text.empty()) throw InvalidInput("empty range");
  std::vector<double> values;
  for (const std::string& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      values.push_back(to_double(parts[0], text));
      continue;
    }
    if (parts.size() != 3) {
      throw InvalidInput("range '" + item + "' must be start:stop:step");
    }
    const double start = to_double(parts[0], text);
    const double stop = to_double(parts[1], text);
    const double step = to_double(parts[2], text);
    if (!(step > 0.0)) throw InvalidInput("range '" + item + "' needs a positive step");
    if (stop < start) throw InvalidInput("range '" + item + "' has stop < start");
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
    if (count > 10'000'000) throw InvalidInput("range '" + item + "' is too long");
    for (long long i = 0; i <= count; ++i) values.push_back(start + i * step);
  }
  return values;
}

std::vector<int> parse_int_range(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_range(text)) {
    if (v != std::round(v) || std::abs(v) > 1e9) {
      throw InvalidInput("'" + text + "' must contain integers only");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string command_name(Command command) {
  switch (command) {
    case Command::Dispersion:
      return "dispersion";
    case Command::Cfl:
      return "cfl";
    case Command::Condition:
      return "condition";
    case Command::FullyDiscrete:
      return "fully-discrete";
    case Command::Verify:
      return "verify";
    case Command::Mesh:
      return "mesh";
  }
  return "unknown";
}

void SweepSpec::validate() const {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw InvalidInput(message);
  };
  auto nonempty = [&](const auto& list, const char* name) {
    require(!list.empty(), std::string(name) + ": range is empty");
  };
  require(threads >= 1, "threads: must be at least 1");
  if (command == Command::Mesh) {
    require(mesh_dims.size() == 3, "dims: expected three element counts");
    for (int d : mesh_dims) require(d >= 2, "dims: need at least 2 elements per direction");
    nonempty(jitter, "jitter");
    for (double jf : jitter) require(jf >= 0.0 && jf < 1.0, "jitter: must lie in [0, 1)");
    return;
  }
  require(dim >= 1 && dim <= 3, "d: dimension must be 1, 2 or 3");
  if (command == Command::Verify) require(dim <= 2, "d: verify supports 1D and 2D");
  nonempty(orders, "p");
  nonempty(families, "family");
  nonempty(alphas, "alpha");
  nonempty(gx, "gx");
  nonempty(gy, "gy");
  nonempty(gz, "gz");
  nonempty(dy_ratio, "dy");
  nonempty(dz_ratio, "dz");
  nonempty(theta, "theta");
  nonempty(phi, "phi");
  for (int p : orders) require(p >= 0 && p <= 12, "p: order must lie in [0, 12]");
  for (const auto& f : families) {
    require(f == "dg" || f == "huynh" || f == "osfr", "family: unknown family '" + f + "'");
    if (f == "osfr") nonempty(iotas, "iota");
  }
  for (double a : alphas) require(a >= 0.5 && a <= 1.0, "alpha: must lie in [0.5, 1]");
  for (const auto* list : {&gx, &gy, &gz, &dy_ratio, &dz_ratio}) {
    for (double v : *list) require(v > 0.0, "stencil: widths and expansion factors must be positive");
  }
  for (const auto* list : {&theta, &phi}) {
    for (double v : *list) require(v >= 0.0 && v <= 90.0, "angles: must lie in [0, 90] degrees");
  }
  if (dim == 1) {
    for (double t : theta) require(t == 0.0, "theta: 1D runs need theta = 0");
  }
  if (dim <= 2) {
    for (double t : phi) require(t == 0.0, "phi: 1D and 2D runs need phi = 0");
  }
  RkScheme::parse(rk);
  if (command == Command::FullyDiscrete) require(tau > 0.0, "tau: must be positive");
  if (command == Command::Verify) {
    require(cells >= 4, "cells: need at least 4");
    require(tolerance > 0.0, "tolerance: must be positive");
    for (double g : gx) require(g == 1.0, "gx: verify runs on uniform grids");
    for (double g : gy) require(g == 1.0, "gy: verify runs on uniform grids");
  }
  for (double k : khat) require(k > 0.0, "khat: wavenumbers must be positive");
  if (command != Command::Verify && command != Command::Cfl) {
    for (std::size_t i = 1; i < khat.size(); ++i) {
      require(khat[i] > khat[i - 1], "khat: must be strictly ascending");
    }
  }
  // Construct every scheme once so bad (p, family, iota) pairs are user errors.
  for (const Job& job : expand_jobs(*this)) make_scheme(*this, job);
}

SweepTable run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<Job> jobs = expand_jobs(spec);
  const std::vector<double> khat = spec.khat.empty() ? default_khat(spec.command) : spec.khat;
  SweepTable table;
  table.command = spec.command;
  table.columns = columns_for(spec.command);

  std::vector<JobOutput> results(jobs.size());
  auto run_one = [&](std::size_t j) {
    try {
      switch (spec.command) {
        case Command::Dispersion:
        case Command::Condition:
        case Command::FullyDiscrete:
          results[j] = run_spectral(spec, jobs[j], khat);
          break;
        case Command::Cfl:
          results[j] = run_cfl(spec, jobs[j]);
          break;
        case Command::Verify:
          results[j] = run_verify(spec, jobs[j], khat);
          break;
        case Command::Mesh:
          results[j] = run_mesh(spec, jobs[j]);
          break;
      }
    } catch (const NumericalError& e) {
      results[j] = failed_job(spec, jobs[j], table.columns.size(), khat, e.what());
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(spec.threads), std::max<std::size_t>(1, jobs.size()));
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run_one(j);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t j = w; j < jobs.size(); j += workers) run_one(j);
      });
    }
    for (auto& t : pool) t.join();
  }

  for (JobOutput& r : results) {
    table.failed_rows += r.failed;
    table.failed_checks += r.failed_checks;
    for (auto& row : r.rows) table.rows.push_back(std::move(row));
  }
  return table;
}

void write_csv(std::ostream& out, const SweepTable& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      const Cell& cell = row[c];
      if (const auto* d = std::get_if<double>(&cell)) {
        out << format_real(*d);
      } else if (const auto* i = std::get_if<long long>(&cell)) {
        out << *i;
      } else if (const auto* s = std::get_if<std::string>(&cell)) {
        out << csv_escape(*s);
      }
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const SweepSpec& spec, const SweepTable& table) {
  using nlohmann::json;
  json echo = {{"command", command_name(spec.command)}, {"threads", spec.threads}};
  if (spec.command == Command::Mesh) {
    echo["dims"] = spec.mesh_dims;
    echo["jitter"] = spec.jitter;
    echo["seed"] = spec.seed;
  } else {
    echo["d"] = spec.dim;
    echo["p"] = spec.orders;
    echo["family"] = spec.families;
    echo["iota"] = spec.iotas;
    echo["alpha"] = spec.alphas;
    echo["gx"] = spec.gx;
    echo["gy"] = spec.gy;
    echo["gz"] = spec.gz;
    echo["dy"] = spec.dy_ratio;
    echo["dz"] = spec.dz_ratio;
    echo["theta"] = spec.theta;
    echo["phi"] = spec.phi;
    echo["khat"] = spec.khat.empty() ? default_khat(spec.command) : spec.khat;
    echo["points"] = spec.rule == PointRule::GaussLegendre ? "gauss" : "lobatto";
    echo["rk"] = spec.rk;
    echo["tau"] = spec.tau;
    if (spec.command == Command::Verify) {
      echo["cells"] = spec.cells;
      echo["tolerance"] = spec.tolerance;
    }
  }
  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      const Cell& cell = row[c];
      json value;
      if (const auto* d = std::get_if<double>(&cell)) {
        value = std::isfinite(*d) ? json(*d) : json(format_real(*d));
      } else if (const auto* i = std::get_if<long long>(&cell)) {
        value = *i;
      } else if (const auto* s = std::get_if<std::string>(&cell)) {
        value = *s;
      }
      obj[table.columns[c]] = value;
    }
    rows.push_back(std::move(obj));
  }
  json doc = {{"tool", "frvn"},
              {"version", kVersion},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"command", command_name(spec.command)},
              {"spec", echo},
              {"columns", table.columns},
              {"rows", rows}};
  out << doc.dump(2) << '\n';
}

}  // namespace frvn
