#include "bsl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "bsl/diagrams.hpp"
#include "bsl/eigen.hpp"
#include "bsl/error.hpp"
#include "bsl/geometry.hpp"
#include "bsl/lab.hpp"

namespace bsl::cli {

using nlohmann::json;

namespace {

constexpr double kCommuteTol = 1e-12;
constexpr double kMembershipTol = 1e-12;
constexpr double kInvolutionTol = 1e-12;
constexpr double kFixedPointTol = 1e-9;

struct Output {
  std::string text;
};

std::vector<double> default_scales() {
  std::vector<double> s;
  for (int e = -4; e <= 4; ++e) s.push_back(std::ldexp(1.0, e));
  return s;
}

std::vector<double> parse_scales(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad scale '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty scale list");
  return out;
}

void validate_grid(const RunConfig& cfg) {
  const int n = cfg.grid;
  if (n < 64 || (n & (n - 1)) != 0) {
    throw Error(ErrorCode::InvalidArgument, "--grid must be a power of two >= 64");
  }
  if (cfg.modes < 1 || cfg.modes > 64) {
    throw Error(ErrorCode::InvalidArgument, "--modes must be in 1..64");
  }
}

geometry::MetricSpec metric_for(const RunConfig& cfg) {
  const auto id = diagrams::parse_catalog_id(cfg.diagram);
  const auto d = diagrams::catalog(id);
  const auto def = geometry::default_metric(id);
  return geometry::kaluza_klein(d, cfg.base_radius.value_or(def.base_radius),
                                cfg.fiber_scale.value_or(def.fiber_scale));
}

json config_echo(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["diagram"] = cfg.diagram;
  j["side"] = cfg.side;
  j["grid"] = cfg.grid;
  j["modes"] = cfg.modes;
  j["scales"] = cfg.scales;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["format"] = cfg.format.empty() ? "json" : cfg.format;
  j["expect"] = cfg.expect.empty() ? json(nullptr) : json(cfg.expect);
  j["tolerance"] = cfg.tolerance ? json(*cfg.tolerance) : json(nullptr);
  j["include_zero"] = cfg.include_zero;
  j["fiber_scale"] = cfg.fiber_scale ? json(*cfg.fiber_scale) : json(nullptr);
  j["base_radius"] = cfg.base_radius ? json(*cfg.base_radius) : json(nullptr);
  return j;
}

json envelope(const RunConfig& cfg) {
  json j;
  j["schema"] = kSchema;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["command"] = cfg.command;
  j["config"] = config_echo(cfg);
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Writes next to the target and renames, so readers never see a partial file.
void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) throw Error(ErrorCode::InvalidArgument, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::InvalidArgument, "cannot rename onto '" + path + "': " + ec.message());
  }
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out.empty()) {
    out << content;
  } else {
    write_atomic(cfg.out, content);
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

// ---------------------------------------------------------------- catalog

int cmd_catalog(const RunConfig& cfg, std::ostream& out) {
  const auto& entries = diagrams::catalog_entries();
  if (cfg.format == "json") {
    json j = envelope(cfg);
    auto arr = json::array();
    for (const auto& e : entries) {
      arr.push_back({{"id", e.id},
                     {"description", e.description},
                     {"group", e.group},
                     {"cohomogeneity_one", e.cohomogeneity_one},
                     {"spectra_supported", e.cohomogeneity_one}});
    }
    j["result"] = {{"entries", arr}};
    emit(cfg, dump(j), out);
  } else if (cfg.format == "csv") {
    std::ostringstream os;
    os << "id,group,cohomogeneity_one,spectra_supported\n";
    for (const auto& e : entries) {
      os << e.id << ',' << e.group << ',' << e.cohomogeneity_one << ',' << e.cohomogeneity_one << '\n';
    }
    emit(cfg, os.str(), out);
  } else {
    std::ostringstream os;
    for (const auto& e : entries) {
      os << std::left << std::setw(12) << e.id << std::setw(5) << e.group
         << (e.cohomogeneity_one ? "cohomogeneity-one  " : "spectra-unsupported")
         << "  " << e.description << '\n';
    }
    emit(cfg, os.str(), out);
  }
  return kOk;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  validate_grid(cfg);
  const auto m = metric_for(cfg);
  const auto side = diagrams::parse_side(cfg.side);
  const auto s = lab::side_spectra(m, side, cfg.modes, cfg.grid, cfg.include_zero);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "index,lambda,mult,err\n";
    int idx = cfg.include_zero ? 0 : 1;
    for (const auto& e : s.extrapolated.entries) {
      os << idx << ',' << fmt(e.lambda) << ',' << e.multiplicity << ',' << fmt(e.error) << '\n';
      idx += e.multiplicity;
    }
    emit(cfg, os.str(), out);
    return kOk;
  }
  json j = envelope(cfg);
  j["metric"] = geometry::metric_to_json(m);
  j["tolerances"] = {{"merge_absolute", eigen::kMergeAbsolute},
                     {"merge_relative", eigen::kMergeRelative},
                     {"error_model", "|lambda_2n - lambda_n| / 3"}};
  j["result"] = {{"extrapolated", eigen::to_json(s.extrapolated)},
                 {"coarse", eigen::to_json(s.coarse)},
                 {"fine", eigen::to_json(s.fine)}};
  emit(cfg, dump(j), out);
  return kOk;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  validate_grid(cfg);
  if (!cfg.expect.empty() && cfg.expect != "isospectral" && cfg.expect != "distinct") {
    throw Error(ErrorCode::InvalidArgument, "--expect must be 'isospectral' or 'distinct'");
  }
  const auto m = metric_for(cfg);
  const auto r = lab::compare_basic_spectra(m, cfg.modes, cfg.grid, cfg.tolerance);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "index,lambda_M,lambda_Mprime,relgap\n";
    for (const auto& p : r.pairs) {
      os << p.index << ',' << fmt(p.lambda_m) << ',' << fmt(p.lambda_mprime) << ',' << fmt(p.relgap) << '\n';
    }
    emit(cfg, os.str(), out);
  } else {
    json j = envelope(cfg);
    j["metric"] = geometry::metric_to_json(m);
    j["tolerances"] = {{"isospectral", r.tolerance},
                       {"rule", r.tolerance_from_errors ? "max(1e-8, 3*combined_relative_error)" : "user"}};
    j["result"] = lab::to_json(r);
    emit(cfg, dump(j), out);
  }
  if (cfg.expect == "isospectral" && !r.isospectral) return kExpectationFailed;
  if (cfg.expect == "distinct" && r.isospectral) return kExpectationFailed;
  return kOk;
}

// ---------------------------------------------------------------- warp

int cmd_warp(const RunConfig& cfg, std::ostream& out) {
  validate_grid(cfg);
  const auto m = metric_for(cfg);
  const std::vector<double> scales = cfg.scales.empty() ? default_scales() : cfg.scales;
  std::vector<double> all{0.0};
  all.insert(all.end(), scales.begin(), scales.end());
  const auto reports = lab::warp_break(m, all, cfg.modes, cfg.grid);

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "scale,lambda1_unwarped,lambda1_warped,shift,threshold,broke,lhs,rhs\n";
    for (const auto& r : reports) {
      os << fmt(r.scale) << ',' << fmt(r.lambda1_unwarped) << ',' << fmt(r.lambda1_warped) << ','
         << fmt(r.shift) << ',' << fmt(r.threshold) << ',' << r.broke_isospectrality << ','
         << fmt(r.lhs) << ',' << (r.rhs ? fmt(*r.rhs) : std::string("undefined")) << '\n';
    }
    emit(cfg, os.str(), out);
    return kOk;
  }
  json j = envelope(cfg);
  j["metric"] = geometry::metric_to_json(m);
  j["tolerances"] = {{"break_factor", 10.0},
                     {"degenerate_mean", 1e-10},
                     {"error_model", "|lambda_2n - lambda_n| / 3"}};
  auto arr = json::array();
  bool any_broke = false;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    json e = lab::to_json(reports[i]);
    e["audit"] = lab::to_json(lab::inequality_audit(reports[i]));
    any_broke = any_broke || reports[i].broke_isospectrality;
    arr.push_back(e);
  }
  json control = lab::to_json(reports[0]);
  control["audit"] = lab::to_json(lab::inequality_audit(reports[0]));
  j["result"] = {{"control", control}, {"reports", arr}, {"any_broke", any_broke}};
  emit(cfg, dump(j), out);
  return kOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.samples < 1) throw Error(ErrorCode::InvalidArgument, "--samples must be >= 1");
  const auto d = diagrams::catalog(cfg.diagram);
  algebra::Rng rng(cfg.seed);

  const double commute = diagrams::check_commute(d, cfg.samples, rng);
  const auto membership = diagrams::check_membership(d, cfg.samples, rng);
  const double projection = diagrams::check_projection_invariance(d, cfg.samples, rng);

  const int free_points = std::min(cfg.samples, 100);
  const int net = d.group == algebra::GroupId::Circle ? 64 : 8;
  const auto id = algebra::GroupElement::identity(d.group);
  int bullet_nonfree = 0;
  int star_nonfree = 0;
  int isotropy_mismatch = 0;
  double max_fixed_distance = 0.0;
  for (int s = 0; s < free_points; ++s) {
    const auto p = d.random_point(rng);
    for (auto which : {diagrams::Which::Bullet, diagrams::Which::Star}) {
      const auto fixed = diagrams::isotropy_probe(d, which, p, net);
      bool only_identity = !fixed.empty();
      for (const auto& g : fixed) {
        const double dist = algebra::distance(g, id);
        max_fixed_distance = std::max(max_fixed_distance, dist);
        if (dist > 1e-12) only_identity = false;
      }
      if (!only_identity) ++(which == diagrams::Which::Bullet ? bullet_nonfree : star_nonfree);
    }
    const auto dims = diagrams::isotropy_compare(d, p, net);
    if (dims.base != dims.base_prime) ++isotropy_mismatch;
  }
  const auto transport = diagrams::check_transport(d, cfg.samples, rng);

  json result;
  result["commute_residual"] = commute;
  result["membership_residual"] = {{"bullet", membership.bullet}, {"star", membership.star}};
  result["projection_invariance_residual"] = projection;
  result["freeness"] = {{"points", free_points},
                        {"net_size", algebra::group_net(d.group, net).size()},
                        {"bullet_nonfree_points", bullet_nonfree},
                        {"star_nonfree_points", star_nonfree},
                        {"max_fixed_distance_from_identity", max_fixed_distance}};
  result["isotropy"] = {{"points", free_points}, {"dimension_mismatches", isotropy_mismatch}};
  result["transport"] = {{"samples", transport.samples},
                         {"additive", transport.additive},
                         {"multiplicative", transport.multiplicative},
                         {"unit", transport.unit},
                         {"involution", transport.involution}};
  if (d.cohomogeneity_one) {
    const auto m = metric_for(cfg);
    result["submersion_defect"] = geometry::submersion_defect(m, std::min(cfg.samples, 100), rng);
    const auto pole = geometry::slice_point(m, 0.0);
    const auto dims = diagrams::isotropy_compare(d, pole, net);
    result["isotropy_at_collapsed_orbit"] = {dims.base, dims.base_prime};
  }
  const bool ok = commute <= kCommuteTol && membership.bullet <= kMembershipTol &&
                  membership.star <= kMembershipTol && bullet_nonfree == 0 && star_nonfree == 0 &&
                  isotropy_mismatch == 0 && transport.additive == 0.0 &&
                  transport.multiplicative == 0.0 && transport.unit == 0.0 &&
                  transport.involution <= kInvolutionTol;
  result["passed"] = ok;

  json j = envelope(cfg);
  j["tolerances"] = {{"commute", kCommuteTol},
                     {"membership", kMembershipTol},
                     {"fixed_point", kFixedPointTol},
                     {"involution", kInvolutionTol},
                     {"ring_homomorphism", 0.0}};
  j["result"] = result;
  emit(cfg, dump(j), out);
  return kOk;
}

// ---------------------------------------------------------------- profile

int cmd_profile(const RunConfig& cfg, std::ostream& out) {
  validate_grid(cfg);
  const auto m = metric_for(cfg);
  const auto side = diagrams::parse_side(cfg.side);
  const auto p = geometry::orbit_profile(m, side, cfg.grid);
  if (cfg.format == "json") {
    json j = envelope(cfg);
    j["metric"] = geometry::metric_to_json(m);
    json r = geometry::profile_sidecar(p);
    const auto h = geometry::mean_curvature(p);
    r["t"] = p.t;
    r["w"] = p.w;
    auto hj = json::array();
    for (double v : h) hj.push_back(number_or_string(v));
    r["h"] = hj;
    j["result"] = r;
    emit(cfg, dump(j), out);
    return kOk;
  }
  std::ostringstream csv;
  geometry::write_profile_csv(csv, p);
  emit(cfg, csv.str(), out);
  if (!cfg.out.empty()) {
    json side_j = envelope(cfg);
    side_j["metric"] = geometry::metric_to_json(m);
    side_j["result"] = geometry::profile_sidecar(p);
    write_atomic(cfg.out + ".json", dump(side_j));
  }
  return kOk;
}

// ---------------------------------------------------------------- plotdata

struct Series {
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
};

std::string xml_escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    switch (c) {
      case '&': r += "&amp;"; break;
      case '<': r += "&lt;"; break;
      case '>': r += "&gt;"; break;
      case '"': r += "&quot;"; break;
      default: r += c;
    }
  }
  return r;
}

std::string svg_chart(const Series& s, const std::string& title) {
  constexpr double W = 640.0;
  constexpr double H = 400.0;
  constexpr double pad = 56.0;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) pts.emplace_back(s.x[i], s.y[i]);
  }
  if (!pts.empty()) {
    x0 = x1 = pts[0].first;
    y0 = y1 = pts[0].second;
    for (const auto& [x, y] : pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  auto px = [&](double x) { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); };
  auto py = [&](double y) { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); };

  std::ostringstream os;
  os << std::setprecision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "  <text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"15\">" << xml_escape(title) << "</text>\n";
  os << "  <line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\""
     << H - pad << "\" stroke=\"black\"/>\n";
  os << "  <line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
     << "\" stroke=\"black\"/>\n";
  os << "  <text x=\"" << W / 2 << "\" y=\"" << H - 14 << "\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(s.x_label) << " ["
     << x0 << ", " << x1 << "]</text>\n";
  os << "  <text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\" transform=\"rotate(-90 16 " << H / 2 << ")\">" << xml_escape(s.y_label)
     << " [" << y0 << ", " << y1 << "]</text>\n";
  os << "  <polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) os << ' ';
    os << px(pts[i].first) << ',' << py(pts[i].second);
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

std::string series_csv(const Series& s, const std::vector<std::vector<double>>& extra = {},
                       const std::vector<std::string>& extra_names = {}) {
  std::ostringstream os;
  os << s.x_label << ',' << s.y_label;
  for (const auto& n : extra_names) os << ',' << n;
  os << '\n';
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    os << fmt(s.x[i]) << ',' << fmt(s.y[i]);
    for (const auto& col : extra) os << ',' << fmt(col[i]);
    os << '\n';
  }
  return os.str();
}

double as_number(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    return NAN;
  }
  throw Error(ErrorCode::MalformedInput, "expected a number");
}

int cmd_plotdata(const RunConfig& cfg, std::ostream& out) {
  if (cfg.input.empty()) throw Error(ErrorCode::MalformedInput, "--input is required");
  std::ifstream in(cfg.input, std::ios::binary);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot read '" + cfg.input + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  Series series;
  std::string csv;
  std::string title;
  if (text.rfind("t,w,h", 0) == 0) {
    std::istringstream is(text);
    const auto table = geometry::read_profile_csv(is);
    series = {"t", "w", table.t, table.w};
    csv = series_csv(series, {table.h}, {"h"});
    title = "orbit volume profile";
  } else {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedInput, std::string("not a profile CSV or JSON report: ") + e.what());
    }
    try {
      const std::string command = j.at("command").get<std::string>();
      const json& r = j.at("result");
      if (command == "compare") {
        Series s{"index", "lambda_M", {}, {}};
        std::vector<double> mp, gap;
        for (const auto& p : r.at("pairs")) {
          s.x.push_back(p.at("index").get<double>());
          s.y.push_back(as_number(p.at("lambda_M")));
          mp.push_back(as_number(p.at("lambda_Mprime")));
          gap.push_back(as_number(p.at("relgap")));
        }
        series = s;
        csv = series_csv(series, {mp, gap}, {"lambda_Mprime", "relgap"});
        title = "basic spectra of M and M'";
      } else if (command == "spectrum") {
        Series s{"index", "lambda", {}, {}};
        int idx = r.at("extrapolated").at("includes_zero").get<bool>() ? 0 : 1;
        for (const auto& e : r.at("extrapolated").at("spectrum")) {
          s.x.push_back(idx);
          s.y.push_back(as_number(e.at("lambda")));
          idx += e.at("mult").get<int>();
        }
        series = s;
        csv = series_csv(series);
        title = "basic spectrum";
      } else if (command == "warp") {
        Series s{"scale", "lambda1_warped", {}, {}};
        std::vector<double> base;
        for (const auto& e : r.at("reports")) {
          s.x.push_back(as_number(e.at("scale")));
          s.y.push_back(as_number(e.at("lambda1_warped")));
          base.push_back(as_number(e.at("lambda1_unwarped")));
        }
        series = s;
        csv = series_csv(series, {base}, {"lambda1_unwarped"});
        title = "first basic eigenvalue under vertical warping";
      } else if (command == "profile") {
        Series s{"t", "w", {}, {}};
        for (const auto& v : r.at("t")) s.x.push_back(as_number(v));
        for (const auto& v : r.at("w")) s.y.push_back(as_number(v));
        if (s.x.size() != s.y.size()) throw Error(ErrorCode::MalformedInput, "t and w differ in length");
        std::vector<double> h;
        for (const auto& v : r.at("h")) h.push_back(as_number(v));
        if (h.size() != s.x.size()) throw Error(ErrorCode::MalformedInput, "h has the wrong length");
        series = s;
        csv = series_csv(series, {h}, {"h"});
        title = "orbit volume profile";
      } else {
        throw Error(ErrorCode::MalformedInput, "no plot data for command '" + command + "'");
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedInput, std::string("report is missing fields: ") + e.what());
    }
  }
  emit(cfg, csv, out);
  if (!cfg.svg.empty()) write_atomic(cfg.svg, svg_chart(series, title));
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotCohomogeneityOne: return kNotCohomogeneityOne;
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::NonpositiveWeight: return kSolverFailure;
    case ErrorCode::MalformedInput: return kMalformedInput;
    default: return kUsage;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string scales_text;
  std::string seed_text;

  CLI::App app{"Basic spectra across star diagrams", kToolName};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto add_format = [&](CLI::App* sub, bool catalog = false) {
    sub->add_option("--format", cfg.format, catalog ? "text (default), json or csv" : "json (default) or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "Output file (written atomically); stdout if omitted");
  };
  auto add_metric = [&](CLI::App* sub) {
    sub->add_option("--diagram", cfg.diagram, "Catalog entry: trivial-s2, hopf, gm")->required();
    sub->add_option("--fiber-scale", cfg.fiber_scale, "Fiber scale Q of the connection metric");
    sub->add_option("--base-radius", cfg.base_radius, "Radius of the round base sphere");
  };
  auto add_grid = [&](CLI::App* sub, int modes) {
    cfg.modes = modes;
    sub->add_option("--grid", cfg.grid, "Cells n (power of two >= 64); n and 2n are solved");
    sub->add_option("--modes", cfg.modes, "Number of positive eigenvalues (<= 64)");
  };

  auto* catalog = app.add_subcommand("catalog", "List the built-in diagrams");
  add_format(catalog, true);

  auto* spectrum = app.add_subcommand("spectrum", "Basic spectrum of one side");
  add_metric(spectrum);
  add_grid(spectrum, 4);
  spectrum->add_option("--side", cfg.side, "P, M or Mprime")->check(CLI::IsMember({"P", "M", "Mprime"}));
  spectrum->add_flag("--include-zero", cfg.include_zero, "Report the constant mode as index 0");
  add_format(spectrum);

  auto* compare = app.add_subcommand("compare", "Compare the basic spectra of M and M'");
  add_metric(compare);
  add_grid(compare, 4);
  compare->add_option("--tolerance", cfg.tolerance, "Relative gap accepted as isospectral");
  compare->add_option("--expect", cfg.expect, "isospectral or distinct; exit 4 on mismatch")
      ->check(CLI::IsMember({"isospectral", "distinct"}));
  add_format(compare);

  auto* warp = app.add_subcommand("warp", "Vertical warping by the first eigenfunction");
  add_metric(warp);
  add_grid(warp, 1);
  warp->add_option("--scales", scales_text, "Comma-separated warp scales (default 2^-4..2^4)");
  add_format(warp);

  auto* verify = app.add_subcommand("verify", "Check the actions, projections and transport");
  add_metric(verify);
  verify->add_option("--samples", cfg.samples, "Random samples per check");
  verify->add_option("--seed", seed_text, "Seed for the sampling verifiers");
  add_format(verify);

  auto* profile = app.add_subcommand("profile", "Orbit-volume profile as t,w,h");
  add_metric(profile);
  add_grid(profile, 4);
  profile->add_option("--side", cfg.side, "P, M or Mprime")->check(CLI::IsMember({"P", "M", "Mprime"}));
  add_format(profile);

  auto* plotdata = app.add_subcommand("plotdata", "CSV series and an SVG chart from a report");
  plotdata->add_option("--input", cfg.input, "Profile CSV or JSON report")->required();
  plotdata->add_option("--out", cfg.out, "CSV output; stdout if omitted");
  plotdata->add_option("--svg", cfg.svg, "Standalone SVG line chart");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (!seed_text.empty()) {
      std::size_t used = 0;
      cfg.seed = std::stoull(seed_text, &used);
      if (used != seed_text.size()) throw std::invalid_argument(seed_text);
    }
    if (!scales_text.empty()) cfg.scales = parse_scales(scales_text);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const std::exception&) {
    err << "invalid --seed '" << seed_text << "'\n";
    return kUsage;
  }

  try {
    if (catalog->parsed()) {
      cfg.command = "catalog";
      return cmd_catalog(cfg, out);
    }
    if (spectrum->parsed()) {
      cfg.command = "spectrum";
      return cmd_spectrum(cfg, out);
    }
    if (compare->parsed()) {
      cfg.command = "compare";
      return cmd_compare(cfg, out);
    }
    if (warp->parsed()) {
      cfg.command = "warp";
      return cmd_warp(cfg, out);
    }
    if (verify->parsed()) {
      cfg.command = "verify";
      return cmd_verify(cfg, out);
    }
    if (profile->parsed()) {
      cfg.command = "profile";
      return cmd_profile(cfg, out);
    }
    if (plotdata->parsed()) {
      cfg.command = "plotdata";
      return cmd_plotdata(cfg, out);
    }
  } catch (const Error& e) {
    err << "bsl: " << e.what() << '\n';
    if (e.code() == ErrorCode::NotCohomogeneityOne) {
      err << "bsl: spectra need a cohomogeneity-one diagram; '" << cfg.diagram
          << "' supports verify only\n";
    }
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "bsl: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace bsl::cli
