#include "vantrees/experiments.hpp"

#include "vantrees/infotheory.hpp"
#include "vantrees/optimizer.hpp"
#include "vantrees/svg_plot.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>

namespace vantrees {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::fig1: return "fig1";
    case Experiment::fig2: return "fig2";
    case Experiment::scaling: return "scaling";
    case Experiment::zq_single: return "zq-single";
    case Experiment::adaptive_single: return "adaptive-single";
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::fig1, Experiment::fig2, Experiment::scaling, Experiment::zq_single,
                       Experiment::adaptive_single}) {
    if (to_string(e) == name) return e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string to_string(SingleScheme scheme) {
  switch (scheme) {
    case SingleScheme::fisher: return "fisher";
    case SingleScheme::vantrees: return "vantrees";
    case SingleScheme::fixed_fisher: return "fixed-fisher";
    case SingleScheme::fixed_vantrees: return "fixed-vantrees";
  }
  return "?";
}

bool ExperimentConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::size_t parse_count(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ConfigError("expected a non-negative integer, got '" + text + "'");
  }
  try {
    return static_cast<std::size_t>(std::stoull(t));
  } catch (const std::exception&) {
    throw ConfigError("integer out of range: '" + text + "'");
  }
}

bool parse_bool(const std::string& text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  throw ConfigError("expected a boolean, got '" + text + "'");
}

std::string number(double x) { return fmt::format("{:.17g}", x); }

struct Field {
  std::string section;
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define VT_DOUBLE(sec, name)                                                        \
  Field {                                                                           \
    sec, #name, [](ExperimentConfig& c, const std::string& v) { c.name = parse_number(v); }, \
        [](const ExperimentConfig& c) { return number(c.name); }                    \
  }
#define VT_COUNT(sec, name)                                                        \
  Field {                                                                          \
    sec, #name, [](ExperimentConfig& c, const std::string& v) { c.name = parse_count(v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.name); }           \
  }
#define VT_BOOL(sec, name)                                                        \
  Field {                                                                         \
    sec, #name, [](ExperimentConfig& c, const std::string& v) { c.name = parse_bool(v); }, \
        [](const ExperimentConfig& c) { return std::string(c.name ? "true" : "false"); } \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"run", "experiment", [](ExperimentConfig& c, const std::string& v) { c.experiment = parse_experiment(trim(v)); },
       [](const ExperimentConfig& c) { return to_string(c.experiment); }},
      VT_DOUBLE("model", alpha),
      VT_DOUBLE("model", alpha_min),
      VT_DOUBLE("model", alpha_max),
      VT_DOUBLE("model", alpha_step),
      VT_BOOL("model", calibrate),
      VT_DOUBLE("model", calibration_target),
      VT_DOUBLE("prior", sigma),
      VT_COUNT("prior", grid),
      VT_COUNT("optimizer", budget),
      {"optimizer", "seed",
       [](ExperimentConfig& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(parse_count(v)); },
       [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      VT_COUNT("optimizer", scan_points),
      VT_COUNT("optimizer", refine_budget),
      VT_COUNT("optimizer", max_extra_dims),
      VT_COUNT("adaptive", n),
      VT_COUNT("adaptive", theta_points),
      {"adaptive", "initial_guess",
       [](ExperimentConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "random") c.initial_guess = InitialGuess::random;
         else if (t == "zero") c.initial_guess = InitialGuess::zero;
         else throw ConfigError("initial_guess must be random or zero");
       },
       [](const ExperimentConfig& c) { return to_string(c.initial_guess); }},
      VT_BOOL("adaptive", exclude_singular),
      VT_BOOL("adaptive", allow_large_n),
      {"adaptive", "averaging",
       [](ExperimentConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "inverse_of_mean") c.averaging = VanTreesAveraging::inverse_of_mean;
         else if (t == "mean_of_inverse") c.averaging = VanTreesAveraging::mean_of_inverse;
         else throw ConfigError("averaging must be inverse_of_mean or mean_of_inverse");
       },
       [](const ExperimentConfig& c) { return to_string(c.averaging); }},
      {"adaptive", "scheme",
       [](ExperimentConfig& c, const std::string& v) {
         const std::string t = trim(v);
         for (SingleScheme s : {SingleScheme::fisher, SingleScheme::vantrees, SingleScheme::fixed_fisher,
                                SingleScheme::fixed_vantrees}) {
           if (to_string(s) == t) {
             c.scheme = s;
             return;
           }
         }
         throw ConfigError("scheme must be fisher, vantrees, fixed-fisher or fixed-vantrees");
       },
       [](const ExperimentConfig& c) { return to_string(c.scheme); }},
      {"output", "dir", [](ExperimentConfig& c, const std::string& v) { c.out_dir = trim(v); },
       [](const ExperimentConfig& c) { return c.out_dir.string(); }},
      {"output", "formats",
       [](ExperimentConfig& c, const std::string& v) {
         c.formats.clear();
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) {
           item = trim(item);
           if (item.empty()) continue;
           if (item != "csv" && item != "json" && item != "svg") throw ConfigError("unknown output format '" + item + "'");
           c.formats.push_back(item);
         }
       },
       [](const ExperimentConfig& c) {
         std::string out;
         for (const auto& f : c.formats) out += (out.empty() ? "" : ", ") + f;
         return out;
       }},
  };
  return table;
}

#undef VT_DOUBLE
#undef VT_COUNT
#undef VT_BOOL

// The leading `# ` block of a CSV, the config_ini field of a JSON report or
// the CDATA block of an SVG; any other file is INI text.
std::string embedded_config(const std::string& text, const fs::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".json") {
    try {
      return json::parse(text).at("config_ini").get<std::string>();
    } catch (const json::exception& e) {
      throw ConfigError(path.string() + ": no embedded config (" + e.what() + ")");
    }
  }
  if (ext == ".svg") {
    const auto begin = text.find("<![CDATA[");
    const auto end = text.find("]]>");
    if (begin == std::string::npos || end == std::string::npos || end < begin) {
      throw ConfigError(path.string() + ": no embedded config");
    }
    return text.substr(begin + 9, end - begin - 9);
  }
  if (ext != ".csv") return text;
  std::istringstream in(text);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (line.rfind('#', 0) != 0) break;
    line.erase(0, 1);
    if (!line.empty() && line[0] == ' ') line.erase(0, 1);
    out += line + '\n';
  }
  return out;
}

std::string csv_header(const ExperimentConfig& config) {
  std::istringstream in(render_config(config));
  std::string line;
  std::string out;
  while (std::getline(in, line)) out += line.empty() ? "#\n" : "# " + line + '\n';
  return out;
}

void write_file(const fs::path& path, const std::string& content, ExperimentResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw ConfigError("cannot write " + path.string());
  result.files.push_back(path);
}

fs::path prepare_output(const ExperimentConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec || !fs::is_directory(config.out_dir)) {
    throw ConfigError("cannot create output directory " + config.out_dir.string());
  }
  return config.out_dir;
}

json finite(double x) { return std::isfinite(x) ? json(x) : json(); }

json with_config(json body, const ExperimentConfig& config) {
  json sections = json::object();
  for (const auto& f : fields()) sections[f.section][f.key] = f.get(config);
  body["config"] = std::move(sections);
  body["config_ini"] = render_config(config);
  return body;
}

std::string dump(const json& j) { return j.dump(2) + '\n'; }

AdaptiveOptions adaptive_options(const ExperimentConfig& config) {
  AdaptiveOptions options;
  options.grid_size = config.grid;
  options.theta_points = config.theta_points;
  options.initial_guess = config.initial_guess;
  options.seed = config.seed;
  options.exclude_singular = config.exclude_singular;
  options.averaging = config.averaging;
  options.restricted.scan_points = config.scan_points;
  return options;
}

MonteCarloOptions montecarlo_options(const ExperimentConfig& config) {
  MonteCarloOptions options;
  options.budget = config.budget;
  options.seed = config.seed;
  options.refine_budget = config.refine_budget;
  options.max_extra_dims = config.max_extra_dims;
  return options;
}

json montecarlo_summary(const OptimizationReport& report) {
  json trace = json::array();
  for (const auto& t : report.dimension_trace) {
    trace.push_back({{"enlarged_dim", t.enlarged_dim}, {"best_value", t.best_value}, {"samples", t.samples}});
  }
  return {{"best_value", report.best_value},
          {"samples_used", report.samples_used},
          {"refinement_steps_accepted", report.refinement_steps_accepted},
          {"converged", report.converged},
          {"dimension_trace", std::move(trace)}};
}

std::vector<double> steps_of(const AdaptiveRunReport& report) {
  std::vector<double> x;
  for (const auto& p : report.error_curve) x.push_back(static_cast<double>(p.step));
  return x;
}

std::vector<double> errors_of(const AdaptiveRunReport& report) {
  std::vector<double> y;
  for (const auto& p : report.error_curve) y.push_back(p.error);
  return y;
}

}  // namespace

double parse_number(const std::string& text) {
  static const std::regex pattern(
      R"(^([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(\*?)\s*(pi)?\s*(?:/\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))?$)",
      std::regex::icase);
  const std::string t = trim(text);
  std::smatch m;
  if (!std::regex_match(t, m, pattern) || (!m[2].matched && !m[4].matched) || (m[3].length() > 0 && !(m[2].matched && m[4].matched))) {
    throw ConfigError("expected a number, got '" + text + "'");
  }
  double value = m[2].matched ? std::stod(m[2].str()) : 1.0;
  if (m[4].matched) value *= kPi;
  if (m[5].matched) {
    const double den = std::stod(m[5].str());
    if (den == 0.0) throw ConfigError("division by zero in '" + text + "'");
    value /= den;
  }
  return m[1].str() == "-" ? -value : value;
}

ExperimentConfig parse_config(const std::string& text, Experiment experiment) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
  }
  ExperimentConfig config;
  config.experiment = experiment;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' outside a [section]");
    for (const auto& [key, value] : body) {
      const auto& table = fields();
      const auto it = std::find_if(table.begin(), table.end(),
                                   [&](const Field& f) { return f.section == section && f.key == key; });
      if (it == table.end()) throw ConfigError("unknown config key [" + section + "] " + key);
      it->set(config, value.get_value<std::string>());
    }
  }
  return config;
}

ExperimentConfig load_config(const fs::path& path, Experiment experiment) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  ExperimentConfig config = parse_config(embedded_config(buffer.str(), path), experiment);
  config.experiment = experiment;
  return config;
}

std::string render_config(const ExperimentConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out += '\n';
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.key + " = " + f.get(config) + '\n';
  }
  return out;
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(std::isfinite(c.alpha) && c.alpha >= 0.0, "alpha must be a non-negative number");
  require(std::isfinite(c.alpha_min) && std::isfinite(c.alpha_max) && c.alpha_min >= 0.0 && c.alpha_min <= c.alpha_max,
          "alpha range must satisfy 0 <= alpha_min <= alpha_max");
  require(std::isfinite(c.alpha_step) && c.alpha_step > 0.0, "alpha_step must be positive");
  require(std::isfinite(c.sigma) && c.sigma > 0.0, "sigma must be positive");
  require(c.grid >= 3, "grid must have at least 3 points");
  require(c.budget >= 1, "budget must be at least 1");
  require(c.scan_points >= 3, "scan_points must be at least 3");
  require(c.n >= 1, "n must be at least 1");
  require(c.theta_points >= 1, "theta_points must be at least 1");
  require(!c.formats.empty(), "formats must not be empty");
  require(c.calibration_target > 0.0, "calibration_target must be positive");
  const bool tree = c.experiment == Experiment::fig2 ||
                    (c.experiment == Experiment::adaptive_single &&
                     (c.scheme == SingleScheme::fisher || c.scheme == SingleScheme::vantrees));
  if (tree) {
    require(c.n <= kMaxTreeDepth, fmt::format("n = {} exceeds the outcome-tree limit {}", c.n, kMaxTreeDepth));
  }
  if (c.experiment == Experiment::fig2) {
    require(c.n <= 12 || c.allow_large_n, "fig2 refuses n > 12 unless allow_large_n is set");
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  switch (config.experiment) {
    case Experiment::fig1: return cmd_fig1(config);
    case Experiment::fig2: return cmd_fig2(config);
    case Experiment::scaling: return cmd_scaling(config);
    case Experiment::zq_single: return cmd_zq_single(config);
    case Experiment::adaptive_single: return cmd_adaptive_single(config);
  }
  throw ConfigError("unknown experiment");
}

ExperimentResult cmd_fig1(const ExperimentConfig& config) {
  validate(config);
  const fs::path dir = prepare_output(config);
  ExperimentResult result;

  std::vector<double> alphas;
  for (std::size_t i = 0;; ++i) {
    const double a = config.alpha_min + static_cast<double>(i) * config.alpha_step;
    if (a > config.alpha_max + 1e-9 * config.alpha_step) break;
    alphas.push_back(a);
  }

  const PriorGrid prior = gaussian_prior(config.sigma, config.grid);
  const MonteCarloOptions mc_options = montecarlo_options(config);
  RestrictedOptions restricted_options;
  restricted_options.scan_points = config.scan_points;

  std::vector<double> analytic, numeric, vq, restricted;
  json rows = json::array();
  for (double a : alphas) {
    const CoherentModel model(a);
    const OptimizationReport mc = optimize_montecarlo(model, prior, mc_options);
    const OptimizationReport rs = optimize_restricted(model, prior, restricted_options);
    analytic.push_back(zq_restricted_analytic(model, config.sigma));
    numeric.push_back(mc.best_value);
    vq.push_back(generalized_qfi_vq(model, prior));
    restricted.push_back(rs.best_value);
    result.converged = result.converged && mc.converged;
    rows.push_back({{"alpha", a},
                    {"zq_analytic", analytic.back()},
                    {"zq_numeric", numeric.back()},
                    {"vq", vq.back()},
                    {"zq_restricted", restricted.back()},
                    {"restricted_epsilon", *rs.best_epsilon},
                    {"montecarlo", montecarlo_summary(mc)}});
  }

  if (config.wants("csv")) {
    std::string csv = csv_header(config) + "alpha,zq_analytic,zq_numeric,vq,zq_restricted\n";
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      csv += fmt::format("{},{},{},{},{}\n", number(alphas[i]), number(analytic[i]), number(numeric[i]), number(vq[i]),
                         number(restricted[i]));
    }
    write_file(dir / "fig1.csv", csv, result);
  }
  if (config.wants("json")) {
    write_file(dir / "fig1.json", dump(with_config({{"rows", rows}, {"converged", result.converged}}, config)), result);
  }
  if (config.wants("svg")) {
    const PlotSpec spec{fmt::format("Z_Q vs |alpha|, sigma = {:.4g}", config.sigma), "|alpha|", "information", false};
    const std::vector<Series> series = {
        {"analytic", alphas, analytic, SeriesStyle::line, "#1f77b4"},
        {"Monte Carlo", alphas, numeric, SeriesStyle::markers, "#d62728"},
        {"V_Q", alphas, vq, SeriesStyle::dashed, "#2ca02c"},
    };
    write_file(dir / "fig1.svg", render_svg(spec, series, render_config(config)), result);
  }
  return result;
}

ExperimentResult cmd_fig2(const ExperimentConfig& config) {
  validate(config);
  const fs::path dir = prepare_output(config);
  ExperimentResult result;

  const CoherentModel model(config.alpha);
  const AdaptiveOptions options = adaptive_options(config);
  const AdaptiveRunReport fisher = run_fisher_adaptive(model, config.n, options);
  const AdaptiveRunReport vantrees = run_vantrees_adaptive(model, config.n, options);

  if (config.wants("csv")) {
    std::string csv = csv_header(config) + "n,err_fisher,err_vantrees,err_vantrees_mean_inverse\n";
    for (std::size_t k = 0; k < config.n; ++k) {
      csv += fmt::format("{},{},{},{}\n", k + 1, number(fisher.error_curve[k].error),
                         number(vantrees.error_curve[k].error), number(vantrees.mean_of_inverse[k]));
    }
    write_file(dir / "fig2.csv", csv, result);
  }
  if (config.wants("json")) {
    write_file(dir / "fig2.json", dump(with_config({{"fisher", fisher}, {"vantrees", vantrees}}, config)), result);
  }
  if (config.wants("svg")) {
    const PlotSpec spec{fmt::format("adaptive error, |alpha| = {:.4g}", config.alpha), "measurements k", "error (rad^2)",
                        true};
    const std::vector<Series> series = {
        {"Fisher", steps_of(fisher), errors_of(fisher), SeriesStyle::line_markers, "#d62728"},
        {"Van Trees", steps_of(vantrees), errors_of(vantrees), SeriesStyle::line_markers, "#1f77b4"},
    };
    write_file(dir / "fig2.svg", render_svg(spec, series, render_config(config)), result);
  }
  return result;
}

ExperimentResult cmd_scaling(const ExperimentConfig& config) {
  validate(config);
  const fs::path dir = prepare_output(config);
  ExperimentResult result;

  const AdaptiveOptions options = adaptive_options(config);
  const double alpha = config.calibrate ? calibrate_alpha(config.calibration_target, options) : config.alpha;
  const CoherentModel model(alpha);
  const AdaptiveRunReport fisher = run_fixed_povm(model, config.n, Scheme::fisher, options);
  const AdaptiveRunReport vantrees = run_fixed_povm(model, config.n, Scheme::vantrees, options);

  std::vector<double> steps, scaled_fisher, scaled_vantrees;
  for (std::size_t k = 0; k < config.n; ++k) {
    const double n = static_cast<double>(k + 1);
    steps.push_back(n);
    scaled_fisher.push_back(n * fisher.error_curve[k].error);
    scaled_vantrees.push_back(n * vantrees.error_curve[k].error);
  }

  if (config.wants("csv")) {
    std::string csv = csv_header(config) + "n,n_err_fisher,n_err_vantrees\n";
    for (std::size_t k = 0; k < config.n; ++k) {
      csv += fmt::format("{},{},{}\n", k + 1, number(scaled_fisher[k]), number(scaled_vantrees[k]));
    }
    write_file(dir / "scaling.csv", csv, result);
  }
  const double c_fisher = *fisher.fitted_constant;
  const double c_vantrees = *vantrees.fitted_constant;
  json body = {{"alpha", alpha},
               {"calibrated", config.calibrate},
               {"c_fisher", finite(c_fisher)},
               {"c_vantrees", finite(c_vantrees)},
               {"ratio", finite(c_fisher / c_vantrees)},
               {"slope_fisher", finite(last_quartile_relative_slope(fisher.error_curve))},
               {"slope_vantrees", finite(last_quartile_relative_slope(vantrees.error_curve))},
               {"likelihood_term", *vantrees.likelihood_term},
               {"prior_term", *vantrees.prior_term},
               {"epsilon_fisher", *fisher.epsilon},
               {"epsilon_vantrees", *vantrees.epsilon},
               {"singular_thetas", fisher.flagged.empty() ? 0 : fisher.flagged.front()}};
  if (config.wants("json")) write_file(dir / "scaling.json", dump(with_config(body, config)), result);
  if (config.wants("svg")) {
    const PlotSpec spec{fmt::format("n * error, |alpha| = {:.6g}", alpha), "n", "n * error (rad^2)", true};
    const std::vector<Series> series = {
        {"fixed Fisher", steps, scaled_fisher, SeriesStyle::line_markers, "#d62728"},
        {"fixed Van Trees", steps, scaled_vantrees, SeriesStyle::line_markers, "#1f77b4"},
    };
    write_file(dir / "scaling.svg", render_svg(spec, series, render_config(config)), result);
  }
  return result;
}

ExperimentResult cmd_zq_single(const ExperimentConfig& config) {
  validate(config);
  const fs::path dir = prepare_output(config);
  ExperimentResult result;

  const CoherentModel model(config.alpha);
  const PriorGrid prior = gaussian_prior(config.sigma, config.grid);
  RestrictedOptions restricted_options;
  restricted_options.scan_points = config.scan_points;
  const OptimizationReport rs = optimize_restricted(model, prior, restricted_options);
  const OptimizationReport mc = optimize_montecarlo(model, prior, montecarlo_options(config));
  const double analytic = zq_restricted_analytic(model, config.sigma);
  const double vq = generalized_qfi_vq(model, prior);
  result.converged = mc.converged;

  if (config.wants("csv")) {
    std::string csv = csv_header(config) + "alpha,sigma,zq_analytic,zq_restricted,zq_numeric,vq\n";
    csv += fmt::format("{},{},{},{},{},{}\n", number(config.alpha), number(config.sigma), number(analytic),
                       number(rs.best_value), number(mc.best_value), number(vq));
    write_file(dir / "zq.csv", csv, result);
  }
  if (config.wants("json")) {
    const json body = {{"alpha", config.alpha},      {"sigma", config.sigma},      {"dim", model.dim()},
                       {"zq_analytic", analytic},    {"restricted", rs},           {"montecarlo", mc},
                       {"vq", vq},                   {"vq_minus_zq", vq - mc.best_value}};
    write_file(dir / "zq.json", dump(with_config(body, config)), result);
  }
  return result;
}

ExperimentResult cmd_adaptive_single(const ExperimentConfig& config) {
  validate(config);
  const fs::path dir = prepare_output(config);
  ExperimentResult result;

  const CoherentModel model(config.alpha);
  const AdaptiveOptions options = adaptive_options(config);
  AdaptiveRunReport report;
  switch (config.scheme) {
    case SingleScheme::fisher: report = run_fisher_adaptive(model, config.n, options); break;
    case SingleScheme::vantrees: report = run_vantrees_adaptive(model, config.n, options); break;
    case SingleScheme::fixed_fisher: report = run_fixed_povm(model, config.n, Scheme::fisher, options); break;
    case SingleScheme::fixed_vantrees: report = run_fixed_povm(model, config.n, Scheme::vantrees, options); break;
  }

  if (config.wants("csv")) {
    std::ostringstream body;
    write_csv(body, report);
    write_file(dir / "adaptive.csv", csv_header(config) + body.str(), result);
  }
  if (config.wants("json")) {
    json j = report;
    j.erase("config");  // the experiment config below supersedes it
    write_file(dir / "adaptive.json", dump(with_config({{"report", j}}, config)), result);
  }
  if (config.wants("svg")) {
    const PlotSpec spec{fmt::format("{} error, |alpha| = {:.4g}", to_string(config.scheme), config.alpha),
                        "measurements k", "error (rad^2)", true};
    const std::vector<Series> series = {
        {to_string(config.scheme), steps_of(report), errors_of(report), SeriesStyle::line_markers, "#1f77b4"}};
    write_file(dir / "adaptive.svg", render_svg(spec, series, render_config(config)), result);
  }
  return result;
}

std::vector<std::vector<double>> read_csv_rows(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace vantrees
