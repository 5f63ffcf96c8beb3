// Command line front end: curvature fields, classified cylinder profiles,
// verification suites and figure-reproduction data.
//
// Exit codes: 0 ok, 1 verification failure, 2 input parse error,
// 3 constraint violation.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "snmgeo/oracle.hpp"
#include "snmgeo/profiles.hpp"
#include "snmgeo/surface.hpp"
#include "snmgeo/verify.hpp"
#include "snmgeo/version.hpp"

namespace {

using nlohmann::json;
using namespace snmgeo;

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct Context {
  std::string command_line;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out_path;  // empty -> stdout
};

std::string header_line(const Context& ctx) {
  return std::string("snmgeo ") + kVersion + " | cmd: " + ctx.command_line +
         " | seed: " + std::to_string(ctx.seed);
}

json meta_object(const Context& ctx) {
  json meta;
  meta["tool"] = "snmgeo";
  meta["version"] = kVersion;
  meta["command"] = ctx.command_line;
  meta["seed"] = ctx.seed;
  return meta;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConstraintError("cannot open output file '" + path + "'");
  out << content;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

std::string svg_polyline(const Context& ctx,
                         const std::vector<std::pair<double, double>>& pts) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& [x, y] : pts) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  const double w = 600.0, h = 400.0, pad = 20.0;
  const double sx = (w - 2 * pad) / std::max(x1 - x0, 1e-12);
  const double sy = (h - 2 * pad) / std::max(y1 - y0, 1e-12);
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<!-- " << header_line(ctx) << " -->\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
      << "\">\n  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" "
         "points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double px = pad + (pts[i].first - x0) * sx;
    const double py = h - pad - (pts[i].second - y0) * sy;
    if (i) svg << ' ';
    svg << fmt(px) << ',' << fmt(py);
  }
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

// --- curvature ---------------------------------------------------------------

struct CurvatureArgs {
  std::string type = "I";
  std::string f_text;
  std::string g_text;
  std::string grid = "-1,-1,1,1,5,5";
  bool verify = false;
  std::string tol = "loose";
};

GridSpec parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  std::size_t offset = 0;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("malformed grid component '" + item + "'", offset);
    }
    offset += item.size() + 1;
  }
  if (parts.size() != 6)
    throw ParseError("grid must be u0,v0,u1,v1,nu,nv", 0);
  return GridSpec(parts[0], parts[1], parts[2], parts[3],
                  static_cast<int>(parts[4]), static_cast<int>(parts[5]));
}

int run_curvature(const Context& ctx, const CurvatureArgs& args) {
  const SurfaceKind kind =
      args.type == "I" ? SurfaceKind::TypeI : SurfaceKind::TypeII;
  const char* uvar = kind == SurfaceKind::TypeI ? "x" : "y";
  const char* vvar = kind == SurfaceKind::TypeI ? "y" : "z";
  const Expr f = Expr::parse(args.f_text, uvar);
  const Expr g = Expr::parse(args.g_text, vvar);
  const GridSpec grid = parse_grid(args.grid);
  const double pad = 0.01;  // room for oracle stencils
  const TranslationSurface s(
      kind, f, g, {grid.u0 - pad, grid.v0 - pad, grid.u1 + pad, grid.v1 + pad});
  const OracleConfig cfg =
      args.tol == "strict" ? OracleConfig::strict() : OracleConfig::loose();

  const CurvatureReport report =
      args.verify ? compare_curvatures(s, grid, cfg)
                  : curvature_grid_closed(s, grid);

  if (ctx.format == "json") {
    json doc;
    doc["meta"] = meta_object(ctx);
    json rows = json::array();
    for (const auto& pt : report.points) {
      json row;
      row["u"] = pt.u;
      row["v"] = pt.v;
      row["K_closed"] = pt.k_closed;
      if (args.verify) {
        row["K_gauss"] = pt.k_gauss;
        row["K_oracle"] = pt.k_oracle;
      }
      row["clipped"] = pt.clipped;
      rows.push_back(row);
    }
    doc["points"] = rows;
    doc["k_closed_spread"] = report.k_closed_spread;
    write_output(ctx.out_path, doc.dump(2) + "\n");
    return 0;
  }

  std::ostringstream csv;
  csv << "# " << header_line(ctx) << "\n";
  csv << (args.verify ? "u,v,K_closed,K_gauss,K_oracle\n" : "u,v,K_closed\n");
  for (const auto& pt : report.points) {
    csv << fmt(pt.u) << ',' << fmt(pt.v) << ',' << fmt(pt.k_closed);
    if (args.verify) csv << ',' << fmt(pt.k_gauss) << ',' << fmt(pt.k_oracle);
    csv << '\n';
  }
  write_output(ctx.out_path, csv.str());
  return 0;
}

// --- profile -----------------------------------------------------------------

struct ProfileArgs {
  std::string family_json;
  int samples = 201;
};

std::string profile_csv(const Context& ctx, const CylinderFamily& fam,
                        const ProfileCurve& curve) {
  const bool closed = has_closed_form(fam);
  std::ostringstream csv;
  csv << "# " << header_line(ctx) << "\n";
  csv << "# family: " << family_to_json(fam) << "\n";
  csv << "# maximal_domain: [" << fmt(curve.domain.lo) << ", "
      << fmt(curve.domain.hi) << "]\n";
  csv << "t,profile,x_of_t\n";
  for (const auto& s : curve.samples) {
    const double t = closed ? s.param : s.value;
    csv << fmt(t) << ',' << fmt(s.value) << ',' << fmt(s.param) << '\n';
  }
  return csv.str();
}

int run_profile(const Context& ctx, const ProfileArgs& args) {
  const CylinderFamily fam = family_from_json(args.family_json);
  if (args.samples < 2) throw ConstraintError("need at least 2 samples");
  const Interval window = interior_window(fam, 0.05);
  const std::vector<double> grid = linspace(window.lo, window.hi, args.samples);
  const ProfileCurve curve = quadrature_profile(fam, grid);

  if (ctx.format == "svg") {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : curve.samples) pts.emplace_back(s.param, s.value);
    write_output(ctx.out_path, svg_polyline(ctx, pts));
    return 0;
  }
  if (ctx.format == "json") {
    json doc;
    doc["meta"] = meta_object(ctx);
    doc["family"] = json::parse(family_to_json(fam));
    doc["maximal_domain"] = {curve.domain.lo, curve.domain.hi};
    json rows = json::array();
    const bool closed = has_closed_form(fam);
    for (const auto& s : curve.samples)
      rows.push_back({{"t", closed ? s.param : s.value},
                      {"profile", s.value},
                      {"x_of_t", s.param}});
    doc["samples"] = rows;
    write_output(ctx.out_path, doc.dump(2) + "\n");
    return 0;
  }
  write_output(ctx.out_path, profile_csv(ctx, fam, curve));
  return 0;
}

// --- verify ------------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  int n = -1;  // per-suite default
  std::string tol = "loose";
};

int run_verify(const Context& ctx, const VerifyArgs& args) {
  const OracleConfig cfg =
      args.tol == "strict" ? OracleConfig::strict() : OracleConfig::loose();
  std::vector<SuiteReport> reports;
  auto want = [&](const char* name) {
    return args.suite == "all" || args.suite == name;
  };
  if (want("oracle"))
    reports.push_back(
        run_oracle_suite(ctx.seed, args.n > 0 ? args.n : 100, cfg));
  if (want("cylinders"))
    reports.push_back(run_cylinder_suite(ctx.seed, args.n > 0 ? args.n : 50));
  if (want("classification"))
    reports.push_back(
        run_classification_suite(ctx.seed, args.n > 0 ? args.n : 500));
  if (want("k1"))
    reports.push_back(run_k1_suite(ctx.seed, args.n > 0 ? args.n : 1000));
  if (reports.empty())
    throw ConstraintError(
        "suite must be one of all, oracle, cylinders, classification, k1");

  bool ok = true;
  json doc;
  doc["meta"] = meta_object(ctx);
  json out = json::array();
  for (const SuiteReport& r : reports) {
    ok = ok && r.passed();
    json jr;
    jr["suite"] = r.suite;
    jr["n"] = r.n;
    jr["seed"] = r.seed;
    jr["failures"] = r.failures;
    jr["max_errors"] = r.max_errors;
    jr["passed"] = r.passed();
    out.push_back(jr);
  }
  doc["reports"] = out;
  doc["passed"] = ok;
  write_output(ctx.out_path, doc.dump(2) + "\n");
  return ok ? 0 : 1;
}

// --- examples ----------------------------------------------------------------

struct ExamplesArgs {
  std::string dir = ".";
  int samples = 201;
};

int run_examples(const Context& ctx, const ExamplesArgs& args) {
  struct Item {
    const char* name;
    CylinderFamily fam;
  };
  const std::vector<Item> items = {
      {"cyl_t51_K05_c2", T51Fam(0.0, 0.5, 2.0)},
      {"cyl_t51_K2_c3", T51Fam(0.0, 2.0, 3.0)},
      {"cyl_t52_Km1_cm2", T52a0Fam(-1.0, -2.0, Sign::Minus)},
      {"cyl_t52_K2_c0", T52a0Fam(2.0, 0.0)},
  };
  std::filesystem::create_directories(args.dir);
  for (const Item& item : items) {
    const Interval window = interior_window(item.fam, 0.05);
    const ProfileCurve curve = quadrature_profile(
        item.fam, linspace(window.lo, window.hi, args.samples));
    const std::string ext = ctx.format == "svg" ? ".svg" : ".csv";
    const std::string path =
        (std::filesystem::path(args.dir) / (std::string(item.name) + ext))
            .string();
    Context file_ctx = ctx;
    file_ctx.out_path = path;
    if (ctx.format == "svg") {
      std::vector<std::pair<double, double>> pts;
      for (const auto& s : curve.samples) pts.emplace_back(s.param, s.value);
      write_output(path, svg_polyline(file_ctx, pts));
    } else {
      write_output(path, profile_csv(file_ctx, item.fam, curve));
    }
    std::cout << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Translation surfaces under the canonical semi-symmetric "
               "non-metric connection: curvature evaluation, constant-curvature "
               "cylinder generation and verification"};
  app.require_subcommand(1);

  Context ctx;
  {
    std::ostringstream cmd;
    for (int i = 1; i < argc; ++i) cmd << (i > 1 ? " " : "") << argv[i];
    ctx.command_line = cmd.str();
  }

  CurvatureArgs cargs;
  CLI::App* curvature =
      app.add_subcommand("curvature", "Evaluate curvature over a grid");
  curvature->add_option("--type", cargs.type, "Surface type (I or II)")
      ->check(CLI::IsMember({"I", "II"}))
      ->required();
  curvature->add_option("--f", cargs.f_text, "First profile expression")
      ->required();
  curvature->add_option("--g", cargs.g_text, "Second profile expression")
      ->required();
  curvature->add_option("--grid", cargs.grid, "Grid u0,v0,u1,v1,nu,nv");
  curvature->add_flag("--verify", cargs.verify,
                      "Add Gauss-pipeline and oracle columns");
  curvature->add_option("--tol", cargs.tol, "Oracle tolerance profile")
      ->check(CLI::IsMember({"strict", "loose"}));

  ProfileArgs pargs;
  CLI::App* profile =
      app.add_subcommand("profile", "Generate a classified cylinder profile");
  profile->add_option("--family", pargs.family_json, "Family JSON object")
      ->required();
  profile->add_option("--samples", pargs.samples, "Number of samples");

  VerifyArgs vargs;
  CLI::App* verify =
      app.add_subcommand("verify", "Run randomized verification suites");
  verify->add_option("--suite", vargs.suite,
                     "all, oracle, cylinders, classification or k1");
  verify->add_option("--n", vargs.n, "Sample count override");
  verify->add_option("--tol", vargs.tol, "Oracle tolerance profile")
      ->check(CLI::IsMember({"strict", "loose"}));

  ExamplesArgs eargs;
  CLI::App* examples = app.add_subcommand(
      "examples", "Dump the four closed-form example curves");
  examples->add_option("--out-dir", eargs.dir, "Output directory");
  examples->add_option("--samples", eargs.samples, "Number of samples");

  for (CLI::App* sub : {curvature, profile, verify, examples}) {
    sub->add_option("--format", ctx.format, "csv, json or svg")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    sub->add_option("--seed", ctx.seed, "RNG seed");
    if (sub != examples)
      sub->add_option("--out", ctx.out_path, "Output path (default stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (curvature->parsed()) return run_curvature(ctx, cargs);
    if (profile->parsed()) return run_profile(ctx, pargs);
    if (verify->parsed()) return run_verify(ctx, vargs);
    if (examples->parsed()) return run_examples(ctx, eargs);
  } catch (const snmgeo::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ConstraintError& e) {
    std::cerr << "constraint violation: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
