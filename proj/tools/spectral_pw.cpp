// Command-line front end: builds models, dumps partitions, runs the
// modulus / Steklov / K-functional tables, constructs and inspects frame
// systems, computes Besov norms, and drives the batch experiment suites.
// Exit codes: 0 success, 1 suite assertions failed, 2 configuration or
// usage errors.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spw/besov.hpp"
#include "spw/frames.hpp"
#include "spw/models.hpp"
#include "spw/partition.hpp"
#include "spw/rng.hpp"
#include "spw/semigroup.hpp"
#include "spw/spectral.hpp"
#include "spw/suites.hpp"

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << body;
}

std::vector<double> log_spaced(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(std::log(a) + (std::log(b) - std::log(a)) * i / (n - 1));
  return out;
}

std::vector<std::vector<double>> read_dense_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

spw::SpectralModel load_or_default_model(const std::string& path) {
  if (!path.empty()) return spw::load_model(path);
  return spw::circle_model(16);
}

// Calibrates the sampling constant on a fine mesh chosen per model kind;
// used wherever a frame system must be built and no C was supplied.
double auto_calibrate(const spw::SpectralModel& model, double m, std::uint64_t seed) {
  double rho = 1.0;
  if (model.kind == "circle") rho = 0.01;
  else if (model.kind == "sphere") rho = 0.05;
  const spw::SamplingSet set = spw::build_sampling_set(model, rho);
  spw::RandomStream rng(seed);
  const spw::PoincareReport rep = spw::poincare_calibrate(model, set, m, 12, 0.0, rng);
  if (!(rep.big_c_hat > 0.0) || !std::isfinite(rep.big_c_hat))
    throw std::runtime_error("calibration failed: C_hat not positive/finite");
  return rep.big_c_hat;
}

spw::FrameSystem build_system(const spw::SpectralModel& model, double delta, double m,
                              double c, std::uint64_t seed) {
  if (c <= 0.0) c = auto_calibrate(model, m, seed);
  const spw::PartitionOfUnity pou =
      spw::build_partition(spw::required_j_max(model.max_sqrt_eigenvalue()));
  return spw::build_frame_system(model, pou, delta, m, c);
}

int do_suite(const std::string& name, const std::string& config_path,
             std::optional<std::uint64_t> seed_flag, const std::string& out_dir) {
  json params = json::object();
  std::uint64_t seed = 42;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config: " + config_path);
    json cfg = json::parse(in);
    if (cfg.contains("seed")) seed = cfg.at("seed").get<std::uint64_t>();
    if (cfg.contains("params")) params = cfg.at("params");
    else {
      params = cfg;
      params.erase("seed");
    }
  }
  if (seed_flag) seed = *seed_flag;

  const spw::SuiteResult result = spw::run_suite(name, seed, params);
  std::filesystem::create_directories(out_dir);
  write_file(out_dir + "/report.csv", result.csv);
  write_file(out_dir + "/summary.json", spw::summary_json(result));
  std::cout << spw::summary_json(result);
  return result.pass ? 0 : 1;
}

// Shared by the modulus / kfun / steklov table modes: sweep the step size and
// report the modulus together with its two-sided K-functional bracket.
void write_bracket_table(const std::string& model_path, int order, std::uint64_t seed,
                         double s_min, double s_max, int count,
                         const std::string& out_path) {
  const spw::SpectralModel model = load_or_default_model(model_path);
  const spw::GroupCache cache = spw::build_group_cache(model);
  spw::RandomStream rng(seed);
  const spw::SpectralVector f(rng.next_complex_vector(model.dim));
  const spw::ModulusKReport rep =
      spw::modulus_k_equivalence(model, cache, order, f, log_spaced(s_min, s_max, count));
  std::string csv = "s,omega_r,k_lower,k_upper,bound_rhs\n";
  for (const spw::ModulusKRow& row : rep.rows)
    csv += fmt(row.s) + "," + fmt(row.omega) + "," + fmt(row.k_lower) + "," +
           fmt(row.k_upper) + "," + fmt(row.bound_rhs) + "\n";
  write_file(out_path, csv);
  std::cout << "wrote " << out_path << "  c_hat=" << fmt(rep.c_hat)
            << " C_hat=" << fmt(rep.big_c_hat) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral-pw: band-limited analysis, sampling frames and Besov norms "
               "on finite spectral models"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ------------------------------------------------------------ suite runner
  // Every suite name is a top-level subcommand.  `steklov` and `frames`
  // double as analysis commands: `steklov --table file.csv` switches to the
  // sweep-table mode, and `frames` defers to its nested build/bounds/
  // reconstruct subcommands when one is given.
  struct SuiteOpts {
    std::string config;
    std::uint64_t seed = 42;
    std::string out = ".";
  };
  auto suite_opts = std::make_shared<SuiteOpts>();
  const auto add_suite_options = [suite_opts](CLI::App* sub) {
    sub->add_option("--config", suite_opts->config,
                    "JSON config: optional \"seed\" plus suite parameters");
    sub->add_option("--seed", suite_opts->seed, "RNG seed (overrides the config)");
    sub->add_option("--out", suite_opts->out, "directory for report.csv / summary.json");
  };
  const auto run_suite_mode = [&exit_code, suite_opts](const std::string& name,
                                                       const CLI::App* sub) {
    std::optional<std::uint64_t> seed;
    if (sub->count("--seed") > 0) seed = suite_opts->seed;
    exit_code = do_suite(name, suite_opts->config, seed, suite_opts->out);
  };
  for (const std::string& name : spw::suite_names()) {
    if (name == "steklov" || name == "frames") continue;  // dual-mode, added below
    CLI::App* sub = app.add_subcommand(name, "run the '" + name + "' experiment suite");
    add_suite_options(sub);
    sub->callback([&run_suite_mode, name, sub] { run_suite_mode(name, sub); });
  }

  // ------------------------------------------------------------- model build
  {
    CLI::App* model_cmd = app.add_subcommand("model", "model construction");
    CLI::App* build = model_cmd->add_subcommand("build", "build a model and write JSON");
    auto kind = std::make_shared<std::string>();
    auto degree = std::make_shared<int>(8);
    auto nodes = std::make_shared<int>(0);
    auto nlat = std::make_shared<int>(0);
    auto nlon = std::make_shared<int>(0);
    auto laplacian = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>("model.json");
    build->add_option("--kind", *kind, "circle|sphere|graph")->required();
    build->add_option("--degree", *degree, "maximal frequency / harmonic degree");
    build->add_option("--nodes", *nodes, "circle node count (0: smallest exact grid)");
    build->add_option("--nlat", *nlat, "sphere latitude count (0: smallest exact grid)");
    build->add_option("--nlon", *nlon, "sphere longitude count (0: smallest exact grid)");
    build->add_option("--laplacian", *laplacian, "dense CSV matrix for --kind graph");
    build->add_option("--out", *out, "output path");
    build->callback([=] {
      spw::SpectralModel model;
      if (*kind == "circle") model = spw::circle_model(*degree, *nodes);
      else if (*kind == "sphere") model = spw::sphere_model(*degree, *nlat, *nlon);
      else if (*kind == "graph") {
        if (laplacian->empty())
          throw std::runtime_error("--laplacian file.csv is required for graph models");
        model = spw::graph_model(read_dense_csv(*laplacian));
      } else throw std::runtime_error("unknown model kind: " + *kind);
      spw::save_model(model, *out);
      std::cout << "wrote " << *out << " (dim " << model.dim << ")\n";
    });
    model_cmd->require_subcommand(1);
  }

  // ---------------------------------------------------------- partition dump
  {
    CLI::App* part = app.add_subcommand("partition", "dyadic partition of unity");
    CLI::App* dump = part->add_subcommand("dump", "write (lambda, G_0..G_J) samples");
    auto jmax = std::make_shared<int>(5);
    auto grid_path = std::make_shared<std::string>("partition.csv");
    auto count = std::make_shared<int>(10000);
    dump->add_option("--jmax", *jmax, "top band index J");
    dump->add_option("--grid", *grid_path, "output CSV path");
    dump->add_option("--count", *count, "number of grid points");
    dump->callback([=] {
      const spw::PartitionOfUnity pou = spw::build_partition(*jmax);
      std::string csv = "lambda";
      for (int j = 0; j <= *jmax; ++j) csv += ",G_" + std::to_string(j);
      csv += "\n";
      for (double x : spw::partition_grid(*jmax, *count)) {
        csv += fmt(x);
        for (int j = 0; j <= *jmax; ++j) csv += "," + fmt(pou.G(j, x));
        csv += "\n";
      }
      write_file(*grid_path, csv);
      std::cout << "wrote " << *grid_path << "\n";
    });
    part->require_subcommand(1);
  }

  // ------------------------------------------- modulus / kfun brackets table
  {
    auto model_path = std::make_shared<std::string>();
    auto order = std::make_shared<int>(2);
    auto seed = std::make_shared<std::uint64_t>(42);
    auto s_min = std::make_shared<double>(1e-2);
    auto s_max = std::make_shared<double>(1e1);
    auto count = std::make_shared<int>(20);
    auto out = std::make_shared<std::string>("modulus.csv");
    const auto table_cmd = [&](const char* name, const char* help) {
      CLI::App* sub = app.add_subcommand(name, help);
      sub->add_option("--model", *model_path, "model JSON (default: circle degree 16)");
      sub->add_option("--r", *order, "smoothness order r");
      sub->add_option("--seed", *seed, "RNG seed for the probe vector");
      sub->add_option("--s-min", *s_min, "smallest step");
      sub->add_option("--s-max", *s_max, "largest step");
      sub->add_option("--count", *count, "number of steps");
      sub->add_option("--out", *out, "output CSV path");
      sub->callback([=] {
        write_bracket_table(*model_path, *order, *seed, *s_min, *s_max, *count, *out);
      });
    };
    table_cmd("modulus", "modulus-vs-K table for a random probe vector");
    table_cmd("kfun", "K-functional bracket table (same columns as 'modulus')");
  }

  // ------------------------------------------- steklov: suite or sweep table
  {
    auto model_path = std::make_shared<std::string>();
    auto order = std::make_shared<int>(2);
    auto s_min = std::make_shared<double>(1e-2);
    auto s_max = std::make_shared<double>(1e1);
    auto count = std::make_shared<int>(20);
    auto table_path = std::make_shared<std::string>();
    CLI::App* sub = app.add_subcommand(
        "steklov", "run the 'steklov' experiment suite, or emit the step-size sweep "
                   "table when --table is given");
    add_suite_options(sub);
    sub->add_option("--table", *table_path,
                    "write the sweep CSV here instead of running the suite");
    sub->add_option("--model", *model_path,
                    "table mode: model JSON (default: circle degree 16)");
    sub->add_option("--r", *order, "table mode: smoothness order r");
    sub->add_option("--s-min", *s_min, "table mode: smallest step");
    sub->add_option("--s-max", *s_max, "table mode: largest step");
    sub->add_option("--count", *count, "table mode: number of steps");
    sub->callback([&run_suite_mode, suite_opts, sub, model_path, order, s_min, s_max,
                   count, table_path] {
      if (sub->count("--table") > 0)
        write_bracket_table(*model_path, *order, suite_opts->seed, *s_min, *s_max, *count,
                            *table_path);
      else
        run_suite_mode("steklov", sub);
    });
  }

  // ------------------------------- frames: suite or build/bounds/reconstruct
  {
    CLI::App* frames_cmd = app.add_subcommand(
        "frames", "run the 'frames' experiment suite, or manage frame systems via "
                  "the build/bounds/reconstruct subcommands");
    add_suite_options(frames_cmd);
    auto model_path = std::make_shared<std::string>();
    auto frame_path = std::make_shared<std::string>("frame.json");
    auto delta = std::make_shared<double>(0.1);
    auto m = std::make_shared<double>(2.0);
    auto big_c = std::make_shared<double>(0.0);
    auto seed = std::make_shared<std::uint64_t>(42);
    auto with_dual = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>("reconstruction.csv");

    CLI::App* build = frames_cmd->add_subcommand("build", "construct and save a system");
    build->add_option("--model", *model_path, "model JSON (default: circle degree 16)");
    build->add_option("--delta", *delta, "frame defect target in (0,1)");
    build->add_option("--m", *m, "Sobolev order for the mesh rule");
    build->add_option("--C", *big_c, "calibrated sampling constant (<= 0: calibrate now)");
    build->add_option("--seed", *seed, "seed for auto-calibration draws");
    build->add_flag("--with-dual", *with_dual, "also compute the canonical dual");
    build->add_option("--out", *frame_path, "output frame JSON path");
    build->callback([=] {
      const spw::SpectralModel model = load_or_default_model(*model_path);
      spw::FrameSystem sys = build_system(model, *delta, *m, *big_c, *seed);
      if (*with_dual) sys = spw::dual_frame(sys);
      spw::save_frame(sys, *frame_path);
      std::cout << "wrote " << *frame_path << " (" << sys.atom_count() << " atoms, bounds ["
                << fmt(sys.lower) << ", " << fmt(sys.upper) << "])\n";
    });

    CLI::App* bounds = frames_cmd->add_subcommand("bounds", "print measured frame bounds");
    bounds->add_option("--frame", *frame_path, "frame JSON path")->required();
    bounds->callback([=] {
      const spw::FrameSystem sys = spw::load_frame(*frame_path);
      json j;
      j["dim"] = sys.dim;
      j["delta"] = sys.delta;
      j["atoms"] = sys.atom_count();
      j["bands"] = sys.bands.size();
      j["lower"] = sys.lower;
      j["upper"] = sys.upper;
      if (sys.has_dual) {
        j["dual_lower"] = sys.dual_lower;
        j["dual_upper"] = sys.dual_upper;
      }
      std::cout << j.dump(2) << "\n";
    });

    CLI::App* rec = frames_cmd->add_subcommand(
        "reconstruct", "analyze a random vector and rebuild it atom by atom");
    rec->add_option("--frame", *frame_path, "frame JSON path (must contain the dual)")
        ->required();
    rec->add_option("--seed", *seed, "RNG seed for the probe vector");
    rec->add_option("--out", *out, "output CSV path");
    rec->callback([=] {
      const spw::FrameSystem sys = spw::load_frame(*frame_path);
      if (!sys.has_dual)
        throw std::runtime_error("frame file has no canonical dual; rebuild with --with-dual");
      spw::RandomStream rng(*seed);
      const spw::SpectralVector f(rng.next_complex_vector(sys.dim));
      const std::vector<spw::CVec> coeffs = spw::analysis(sys, f);
      std::string csv = "j,k,coefficient_re,coefficient_im,residual\n";
      spw::CVec partial(sys.dim, spw::cdbl(0.0));
      for (size_t bi = 0; bi < sys.bands.size(); ++bi) {
        const spw::FrameBand& band = sys.bands[bi];
        for (int k = 0; k < band.count(); ++k) {
          const spw::cdbl c = coeffs[bi][k];
          for (int i = 0; i < sys.dim; ++i) partial[i] += c * band.dual(k, i);
          csv += std::to_string(band.index) + "," + std::to_string(k) + "," +
                 fmt(c.real()) + "," + fmt(c.imag()) + "," +
                 fmt(spw::norm2(spw::sub(partial, f.c))) + "\n";
        }
      }
      write_file(*out, csv);
      std::cout << "wrote " << *out << "\n";
    });
    frames_cmd->require_subcommand(0, 1);
    frames_cmd->callback([&run_suite_mode, frames_cmd] {
      if (frames_cmd->get_subcommands().empty()) run_suite_mode("frames", frames_cmd);
    });
  }

  // ------------------------------------------------------------------ besov
  {
    CLI::App* besov_cmd = app.add_subcommand("besov", "Besov norm computations");
    auto model_path = std::make_shared<std::string>();
    auto method = std::make_shared<std::string>("modulus");
    auto alpha = std::make_shared<double>(0.5);
    auto q = std::make_shared<double>(2.0);
    auto order = std::make_shared<int>(1);
    auto seed = std::make_shared<std::uint64_t>(42);
    auto delta = std::make_shared<double>(0.1);
    auto ensemble = std::make_shared<int>(10);
    auto out = std::make_shared<std::string>();

    CLI::App* compute = besov_cmd->add_subcommand("compute", "one norm on a random vector");
    compute->add_option("--model", *model_path, "model JSON (default: circle degree 16)");
    compute->add_option("--method", *method,
                        "modulus|kfun|approx|lp|frame|derivative|zygmund");
    compute->add_option("--alpha", *alpha, "smoothness index");
    compute->add_option("--q", *q, "integrability index (inf accepted)");
    compute->add_option("--r", *order, "integer order for modulus/kfun");
    compute->add_option("--seed", *seed, "RNG seed for the probe vector");
    compute->add_option("--out", *out, "optional path for the JSON report");
    compute->callback([=] {
      const spw::SpectralModel model = load_or_default_model(*model_path);
      spw::RandomStream rng(*seed);
      const spw::SpectralVector f(rng.next_complex_vector(model.dim));
      const spw::BesovParams p{*alpha, *q, *order};
      spw::BesovReport rep;
      if (*method == "modulus")
        rep = spw::besov_modulus(model, spw::build_group_cache(model), p, f);
      else if (*method == "kfun") rep = spw::besov_kfun(model, p, f);
      else if (*method == "approx") {
        int levels = 0;
        while (std::ldexp(1.0, levels) < model.max_sqrt_eigenvalue()) ++levels;
        rep = spw::besov_approx(model, p, f, levels);
      } else if (*method == "lp") {
        const spw::PartitionOfUnity pou =
            spw::build_partition(spw::required_j_max(model.max_sqrt_eigenvalue()));
        rep = spw::besov_lp(model, pou, p, f);
      } else if (*method == "frame") {
        const spw::FrameSystem sys = build_system(model, *delta, 2.0, 0.0, *seed);
        rep = spw::besov_frame(sys, p, f);
      } else if (*method == "derivative")
        rep = spw::besov_derivative(model, spw::build_group_cache(model), *alpha, *q, f);
      else if (*method == "zygmund")
        rep = spw::besov_zygmund(model, spw::build_group_cache(model),
                                 static_cast<int>(std::lround(*alpha)), *q, f);
      else throw std::runtime_error("unknown method: " + *method);

      json j;
      j["method"] = spw::besov_method_name(rep.method);
      j["value"] = rep.value;
      j["alpha"] = *alpha;
      j["q"] = std::isinf(*q) ? json("inf") : json(*q);
      j["r"] = *order;
      if (rep.grid_points > 0) {
        j["s_min"] = rep.s_min;
        j["s_max"] = rep.s_max;
        j["grid_points"] = rep.grid_points;
        j["tail_low"] = rep.tail_low;
        j["tail_high"] = rep.tail_high;
      } else {
        j["j_min"] = rep.j_min;
        j["j_max"] = rep.j_max;
      }
      if (rep.method == spw::BesovMethod::kfun) {
        j["lower_value"] = rep.lower_value;
        j["upper_value"] = rep.upper_value;
      }
      const std::string body = j.dump(2) + "\n";
      if (!out->empty()) write_file(*out, body);
      std::cout << body;
    });

    CLI::App* compare = besov_cmd->add_subcommand(
        "compare", "all applicable norms over a mode sweep plus a random ensemble");
    compare->add_option("--model", *model_path, "model JSON (default: circle degree 16)");
    compare->add_option("--alpha", *alpha, "smoothness index");
    compare->add_option("--q", *q, "integrability index (inf accepted)");
    compare->add_option("--r", *order, "integer order for modulus/kfun");
    compare->add_option("--ensemble", *ensemble, "random vectors in the ensemble");
    compare->add_option("--delta", *delta, "frame defect for the frame-coefficient norm");
    compare->add_option("--seed", *seed, "RNG seed");
    compare->add_option("--out", *out, "output CSV path")->required();
    compare->callback([=] {
      const spw::SpectralModel model = load_or_default_model(*model_path);
      const spw::GroupCache cache = spw::build_group_cache(model);
      const spw::PartitionOfUnity pou =
          spw::build_partition(spw::required_j_max(model.max_sqrt_eigenvalue()));
      const spw::FrameSystem sys = build_system(model, *delta, 2.0, 0.0, *seed);
      spw::RandomStream rng(*seed);
      const spw::BesovParams p{*alpha, *q, *order};
      const spw::EquivalenceTable table =
          spw::equivalence_report(model, cache, pou, &sys, p, *ensemble, 100.0, rng);
      std::string csv = "row,vector_id,method,value\n";
      for (const spw::EquivalenceRow& row : table.rows)
        for (size_t mi = 0; mi < table.methods.size(); ++mi)
          csv += "value," + row.vector_id + "," +
                 spw::besov_method_name(table.methods[mi]) + "," + fmt(row.values[mi]) +
                 "\n";
      for (const spw::EquivalencePair& pair : table.pairs)
        csv += std::string("pair,,") + spw::besov_method_name(pair.a) + "/" +
               spw::besov_method_name(pair.b) + "," + fmt(pair.ratio_min) + ";" +
               fmt(pair.ratio_max) + "\n";
      write_file(*out, csv);
      std::cout << "wrote " << *out << "  worst_spread=" << fmt(table.worst_spread)
                << " pass=" << (table.pass ? "1" : "0") << "\n";
    });
    besov_cmd->require_subcommand(1);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
