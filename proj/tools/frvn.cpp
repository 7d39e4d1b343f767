// frvn: von Neumann analysis of flux reconstruction on stretched grids.
//
//   frvn dispersion --p 3 --family huynh --alpha 1 --gx 1.1 --d 2 --theta 0:90:1
//   frvn cfl --p 4 --family huynh --rk rk44 --d 2 --gy 0.8 --gx 0.5:1.5:0.05 --theta 0:90:5
//   frvn verify --p 2 --d 2 --theta 30 --khat 1.0
//   frvn mesh --dims 20,20,20 --jitter 0:0.8:0.1 --seed 7
//
// Exit status: 0 success, 1 invalid input, 2 numerical failure (including
// verify rows that FAIL).

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "frvn/error.hpp"
#include "frvn/mesh.hpp"
#include "frvn/sweep.hpp"

namespace {

struct RawOptions {
  std::string d = "1", p = "3", family = "huynh", iota = "0", alpha = "1";
  std::string gx = "1", gy = "1", gz = "1", dy = "1", dz = "1";
  std::string theta = "0", phi = "0", khat;
  std::string points = "gauss", rk = "rk44";
  double tau = 1e-3;
  int cells = 16;
  double tolerance = 1e-6;
  std::string dims = "20,20,20", jitter = "0.5";
  std::uint64_t seed = 1;
  int threads = 1;
  std::string format = "csv", output;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

frvn::SweepSpec build_spec(frvn::Command command, const RawOptions& raw) {
  using frvn::parse_range;
  frvn::SweepSpec spec;
  spec.command = command;
  auto field = [](const char* name, auto&& parse) {
    try {
      return parse();
    } catch (const frvn::InvalidInput& e) {
      throw frvn::InvalidInput(std::string("--") + name + ": " + e.what());
    }
  };
  const auto dims = field("d", [&] { return frvn::parse_int_range(raw.d); });
  if (dims.size() != 1) throw frvn::InvalidInput("--d: give a single dimension");
  spec.dim = dims[0];
  spec.orders = field("p", [&] { return frvn::parse_int_range(raw.p); });
  spec.families = split_list(raw.family);
  spec.iotas = field("iota", [&] { return parse_range(raw.iota); });
  spec.alphas = field("alpha", [&] { return parse_range(raw.alpha); });
  spec.gx = field("gx", [&] { return parse_range(raw.gx); });
  spec.gy = field("gy", [&] { return parse_range(raw.gy); });
  spec.gz = field("gz", [&] { return parse_range(raw.gz); });
  spec.dy_ratio = field("dy", [&] { return parse_range(raw.dy); });
  spec.dz_ratio = field("dz", [&] { return parse_range(raw.dz); });
  spec.theta = field("theta", [&] { return parse_range(raw.theta); });
  spec.phi = field("phi", [&] { return parse_range(raw.phi); });
  if (!raw.khat.empty()) spec.khat = field("khat", [&] { return parse_range(raw.khat); });
  if (raw.points == "gauss") {
    spec.rule = frvn::PointRule::GaussLegendre;
  } else if (raw.points == "lobatto") {
    spec.rule = frvn::PointRule::GaussLobatto;
  } else {
    throw frvn::InvalidInput("--points: expected gauss or lobatto");
  }
  spec.rk = raw.rk;
  spec.tau = raw.tau;
  spec.cells = raw.cells;
  spec.tolerance = raw.tolerance;
  spec.mesh_dims = field("dims", [&] { return frvn::parse_int_range(raw.dims); });
  spec.jitter = field("jitter", [&] { return parse_range(raw.jitter); });
  spec.seed = raw.seed;
  spec.threads = raw.threads;
  if (raw.format == "csv") {
    spec.format = frvn::OutputFormat::Csv;
  } else if (raw.format == "json") {
    spec.format = frvn::OutputFormat::Json;
  } else {
    throw frvn::InvalidInput("--format: expected csv or json");
  }
  spec.validate();
  return spec;
}

void add_scheme_options(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--d", raw.d, "Spatial dimension 1, 2 or 3")->capture_default_str();
  cmd->add_option("--p", raw.p, "Polynomial orders (range)")->capture_default_str();
  cmd->add_option("--family", raw.family, "Correction families: dg,huynh,osfr")
      ->capture_default_str();
  cmd->add_option("--iota", raw.iota, "OSFR parameter values (range)")->capture_default_str();
  cmd->add_option("--alpha", raw.alpha, "Upwinding ratios in [0.5, 1] (range)")
      ->capture_default_str();
  cmd->add_option("--points", raw.points, "Solution points: gauss or lobatto")
      ->capture_default_str();
}

void add_stencil_options(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--gx", raw.gx, "Expansion factor in x (range)")->capture_default_str();
  cmd->add_option("--gy", raw.gy, "Expansion factor in y (range)")->capture_default_str();
  cmd->add_option("--gz", raw.gz, "Expansion factor in z (range)")->capture_default_str();
  cmd->add_option("--dy", raw.dy, "Cell aspect dy/dx (range)")->capture_default_str();
  cmd->add_option("--dz", raw.dz, "Cell aspect dz/dx (range)")->capture_default_str();
}

void add_angle_options(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--theta", raw.theta, "Incidence angle in degrees (range)")
      ->capture_default_str();
  cmd->add_option("--phi", raw.phi, "Elevation angle in degrees (range)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Von Neumann analysis of flux reconstruction on stretched grids"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", frvn::kVersion);
  RawOptions raw;
  app.add_option("--threads", raw.threads, "Worker threads")->capture_default_str();
  app.add_option("--format", raw.format, "Output format: csv or json")->capture_default_str();
  app.add_option("-o,--output", raw.output, "Output file (default: stdout)");

  const std::map<std::string, frvn::Command> commands{
      {"dispersion", frvn::Command::Dispersion}, {"cfl", frvn::Command::Cfl},
      {"condition", frvn::Command::Condition},   {"fully-discrete", frvn::Command::FullyDiscrete},
      {"verify", frvn::Command::Verify},         {"mesh", frvn::Command::Mesh}};
  std::map<std::string, CLI::App*> subs;

  auto* dispersion = app.add_subcommand("dispersion", "Physical-mode dispersion and dissipation");
  auto* cfl = app.add_subcommand("cfl", "CFL limit of an explicit Runge-Kutta scheme");
  auto* condition = app.add_subcommand("condition", "Condition number of the mode matrix");
  auto* fully = app.add_subcommand("fully-discrete", "Modes after time discretization");
  auto* verify = app.add_subcommand("verify", "Time-domain solver against the eigenanalysis");
  auto* mesh = app.add_subcommand("mesh", "Jittered hexahedral mesh quality");
  subs = {{"dispersion", dispersion}, {"cfl", cfl}, {"condition", condition},
          {"fully-discrete", fully},  {"verify", verify}, {"mesh", mesh}};

  for (auto* cmd : {dispersion, cfl, condition, fully, verify}) {
    add_scheme_options(cmd, raw);
    add_angle_options(cmd, raw);
  }
  for (auto* cmd : {dispersion, cfl, condition, fully}) add_stencil_options(cmd, raw);
  for (auto* cmd : {dispersion, condition, fully, verify}) {
    cmd->add_option("--khat", raw.khat, "Normalized wavenumbers (range)");
  }
  for (auto* cmd : {cfl, fully, verify}) {
    cmd->add_option("--rk", raw.rk, "Runge-Kutta scheme: euler, rk33, rk44")
        ->capture_default_str();
  }
  fully->add_option("--tau", raw.tau, "Time step")->capture_default_str();
  verify->add_option("--cells", raw.cells, "Cells per direction")->capture_default_str();
  verify->add_option("--tolerance", raw.tolerance, "Relative tolerance on the decay rate")
      ->capture_default_str();
  mesh->add_option("--dims", raw.dims, "Elements per direction, nx,ny,nz")
      ->capture_default_str();
  mesh->add_option("--jitter", raw.jitter, "Jitter factors in [0, 1) (range)")
      ->capture_default_str();
  mesh->add_option("--seed", raw.seed, "RNG seed")->capture_default_str();
  std::string mesh_file;
  mesh->add_option("--write-mesh", mesh_file, "Write the mesh (single jitter value) to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::string name;
    for (const auto& [key, cmd] : subs) {
      if (cmd->parsed()) name = key;
    }
    const frvn::SweepSpec spec = build_spec(commands.at(name), raw);
    if (!mesh_file.empty()) {
      if (spec.jitter.size() != 1) {
        throw frvn::InvalidInput("--write-mesh: needs exactly one jitter value");
      }
      std::ofstream file(mesh_file);
      if (!file) throw frvn::InvalidInput("--write-mesh: cannot open '" + mesh_file + "'");
      frvn::write_mesh(file, frvn::generate_jittered_mesh(
                                 {spec.mesh_dims[0], spec.mesh_dims[1], spec.mesh_dims[2]},
                                 {1.0, 1.0, 1.0}, spec.jitter[0], spec.seed, spec.threads));
    }
    const frvn::SweepTable table = frvn::run_sweep(spec);

    std::ofstream file;
    if (!raw.output.empty()) {
      file.open(raw.output);
      if (!file) throw frvn::InvalidInput("--output: cannot open '" + raw.output + "'");
    }
    std::ostream& out = raw.output.empty() ? std::cout : file;
    if (spec.format == frvn::OutputFormat::Json) {
      frvn::write_json(out, spec, table);
    } else {
      frvn::write_csv(out, table);
    }
    if (table.failed_rows > 0) {
      std::cerr << "frvn: " << table.failed_rows << " row(s) hit numerical errors\n";
      return 2;
    }
    if (table.failed_checks > 0) {
      std::cerr << "frvn: " << table.failed_checks << " verification(s) failed\n";
      return 2;
    }
    return 0;
  } catch (const frvn::InvalidInput& e) {
    std::cerr << "frvn: error: " << e.what() << '\n';
    return 1;
  } catch (const frvn::Error& e) {
    std::cerr << "frvn: numerical failure: " << e.what() << '\n';
    return 2;
  }
}
