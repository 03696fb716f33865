#include "sigchar/cli.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include <CLI11.hpp>

#include "sigchar/errors.hpp"
#include "sigchar/hopf.hpp"
#include "sigchar/io.hpp"
#include "sigchar/models.hpp"
#include "sigchar/rng.hpp"
#include "sigchar/separation.hpp"
#include "sigchar/signature.hpp"
#include "sigchar/statistics.hpp"

namespace sigchar::cli {

namespace fs = std::filesystem;

namespace {

// Object view that records which keys were read; finish() rejects the rest.
class Section {
public:
  Section(const Json &j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ValidationError(where_ + " must be a JSON object");
  }

  bool has(const std::string &key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const Json &raw(const std::string &key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ValidationError(where_ + ": missing field '" + key + "'");
    return j_.at(key);
  }

  double number(const std::string &key) {
    const Json &v = raw(key);
    if (!v.is_number()) throw ValidationError(where_ + ": '" + key + "' must be a number");
    return v.get<double>();
  }
  double number(const std::string &key, double fallback) { return has(key) ? number(key) : fallback; }

  long long integer(const std::string &key) {
    const Json &v = raw(key);
    if (!v.is_number_integer()) throw ValidationError(where_ + ": '" + key + "' must be an integer");
    return v.get<long long>();
  }
  long long integer(const std::string &key, long long fallback) { return has(key) ? integer(key) : fallback; }

  std::size_t count(const std::string &key) {
    const long long v = integer(key);
    if (v < 1) throw ValidationError(where_ + ": '" + key + "' must be positive");
    return static_cast<std::size_t>(v);
  }
  std::size_t count(const std::string &key, std::size_t fallback) { return has(key) ? count(key) : fallback; }

  std::string text(const std::string &key) {
    const Json &v = raw(key);
    if (!v.is_string()) throw ValidationError(where_ + ": '" + key + "' must be a string");
    return v.get<std::string>();
  }
  std::string text(const std::string &key, const std::string &fallback) { return has(key) ? text(key) : fallback; }

  std::vector<double> numbers(const std::string &key) {
    const Json &v = raw(key);
    if (!v.is_array()) throw ValidationError(where_ + ": '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto &e : v) {
      if (!e.is_number()) throw ValidationError(where_ + ": '" + key + "' must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<int> integers(const std::string &key) {
    const Json &v = raw(key);
    if (!v.is_array()) throw ValidationError(where_ + ": '" + key + "' must be an array of integers");
    std::vector<int> out;
    for (const auto &e : v) {
      if (!e.is_number_integer()) throw ValidationError(where_ + ": '" + key + "' must be an array of integers");
      out.push_back(e.get<int>());
    }
    return out;
  }

  Section sub(const std::string &key) { return Section(raw(key), where_ + "." + key); }

  void finish() const {
    for (const auto &[k, v] : j_.items()) {
      if (!seen_.count(k)) throw ValidationError(where_ + ": unknown field '" + k + "'");
    }
  }

  const std::string &where() const { return where_; }

private:
  const Json &j_;
  std::string where_;
  std::set<std::string> seen_;
};

struct Context {
  fs::path base; // directory of the manifest, for relative input files
  std::uint64_t seed = 0;
};

struct Output {
  Json results = Json::object();
  std::vector<std::pair<std::string, std::string>> csv;
  bool violation = false;
};

fs::path resolve(const Context &ctx, const std::string &file) {
  fs::path p(file);
  return p.is_absolute() ? p : ctx.base / p;
}

PiecewiseLinearPath load_path(const Context &ctx, const Json &v) {
  if (v.is_object()) return path_from_json(v);
  if (!v.is_string()) throw ValidationError("path must be an object or a file name");
  const fs::path file = resolve(ctx, v.get<std::string>());
  if (file.extension() == ".csv") return path_from_csv(read_text_file(file));
  return path_from_json(read_json_file(file));
}

Tensor load_tensor(const Context &ctx, const Json &v) {
  if (v.is_object()) return tensor_from_json(v);
  if (!v.is_string()) throw ValidationError("tensor must be an object or a file name");
  return tensor_from_json(read_json_file(resolve(ctx, v.get<std::string>())));
}

LinearRep load_rep(const Context &ctx, const Json &v) {
  if (v.is_string()) return rep_from_json(read_json_file(resolve(ctx, v.get<std::string>())));
  if (v.is_object() && v.contains("builtin")) {
    Section s(v, "rep");
    const std::string name = s.text("builtin");
    const int width = static_cast<int>(s.integer("width", 2));
    s.finish();
    if (name == "su2_example") return example_rep(width);
    if (name == "su2_example_eigenbasis") return example_rep(width).conjugated(u2_eigenbasis());
    if (name == "scalar_i") {
      std::vector<ComplexMatrix> g(static_cast<std::size_t>(width), ComplexMatrix::Constant(1, 1, Complex(0.0, 1.0)));
      return LinearRep(std::move(g));
    }
    throw ValidationError("rep: unknown builtin '" + name + "'");
  }
  return rep_from_json(v);
}

std::vector<LinearRep> load_panel(Section s, int width, std::uint64_t seed) {
  const std::size_t count = s.count("count", 8);
  const std::uint64_t panel_seed = static_cast<std::uint64_t>(s.integer("seed", static_cast<long long>(seed)));
  std::vector<int> dims{2, 4};
  if (s.has("dims")) dims = s.integers("dims");
  const double scale = s.number("scale", 1.0);
  s.finish();
  for (int h : dims) {
    if (h < 1) throw ValidationError("panel: dimensions must be positive");
  }
  return random_rep_panel(width, count, panel_seed, dims, scale);
}

// Reps from "rep" or "panel"; at least one is required.
std::vector<LinearRep> load_reps(Section &m, const Context &ctx, int width) {
  std::vector<LinearRep> reps;
  if (m.has("rep")) reps.push_back(load_rep(ctx, m.raw("rep")));
  if (m.has("panel")) {
    for (auto &r : load_panel(m.sub("panel"), width, ctx.seed)) reps.push_back(std::move(r));
  }
  if (reps.empty()) throw ValidationError(m.where() + ": 'rep' or 'panel' is required");
  for (const auto &r : reps) {
    if (r.width() != width) throw DimensionError("representation width does not match the input width");
  }
  return reps;
}

struct Model {
  std::string name;
  Json params = Json::object();
  std::optional<LieExpModelParams> lie;
  std::optional<RandomWalkModelParams> walk;
  std::optional<EndpointLaw> endpoint;
  int width = 1;
  int depth = 0;
};

Model parse_model(Section s) {
  Model model;
  model.name = s.text("name");
  if (model.name == "lie_exponential") {
    LieExpModelParams p;
    p.q = s.number("q", 0.5);
    p.width = static_cast<int>(s.integer("width", 2));
    if (s.has("pn")) {
      p.pn = s.numbers("pn");
    } else {
      p.pn = default_pn(static_cast<int>(s.integer("pn_terms", 3)), s.number("pn_c", 0.5));
    }
    p.depth = static_cast<int>(s.integer("depth", p.max_support() + 1));
    p.validate();
    model.lie = p;
    model.width = p.width;
    model.depth = p.depth;
  } else if (model.name == "random_walk") {
    RandomWalkModelParams p;
    p.n_steps = s.count("n_steps");
    p.law = parse_step_law(s.text("law", "rademacher"));
    p.scale = s.number("scale", 0.0);
    p.width = static_cast<int>(s.integer("width", 2));
    p.depth = static_cast<int>(s.integer("depth", 4));
    p.length_q = s.number("length_q", 0.0);
    p.validate();
    model.walk = p;
    model.width = p.width;
    model.depth = p.depth;
  } else if (model.name == "one_d") {
    model.endpoint = parse_endpoint_law(s.text("law", "normal"), s.number("value", 1.0));
    model.depth = static_cast<int>(s.integer("depth", 4));
    if (model.depth < 0) throw ValidationError("model: depth must be non-negative");
    model.width = 1;
  } else {
    throw ValidationError("model: unknown name '" + model.name + "'");
  }
  s.finish();
  return model;
}

SignatureEnsemble build(const Model &model, std::uint64_t seed, std::size_t count) {
  if (model.lie) return sample_lie_exponential(*model.lie, seed, count);
  if (model.walk) return random_walk_ensemble(*model.walk, seed, count);
  return one_d_moment_model(*model.endpoint, model.depth, seed, count);
}

Json level_array(const std::vector<double> &v) { return Json(v); }

void tensor_csv(CsvWriter &csv, const Tensor &x, const Tensor *second) {
  for (int k = 0; k <= x.depth(); ++k) {
    auto lvl = x.level(k);
    for (std::size_t i = 0; i < lvl.size(); ++i) {
      csv.cell(k == 0 ? std::string("e") : format_word(word_from_index(x.width(), k, i)));
      csv.cell(static_cast<long long>(k));
      csv.cell(lvl[i]);
      if (second) csv.cell(second->level(k)[i]);
      csv.end_row();
    }
  }
}

void matrix_csv(CsvWriter &csv, long long tag, const ComplexMatrix &m, const Eigen::MatrixXd *err) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      csv.cell(tag).cell(static_cast<long long>(r + 1)).cell(static_cast<long long>(c + 1));
      csv.cell(m(r, c).real()).cell(m(r, c).imag());
      if (err) csv.cell((*err)(r, c));
      csv.end_row();
    }
  }
}

Json real_matrix_json(const Eigen::MatrixXd &m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    rows.push_back(row);
  }
  return rows;
}

Json charfn_json(const CharFnEstimate &e) {
  return Json{{"mean", matrix_to_json(e.mean)},
              {"stderr", real_matrix_json(e.stderr_abs)},
              {"count", e.count},
              {"exact", e.exact},
              {"tail_bound", e.tail_bound}};
}

// ---------------------------------------------------------------------------

Output cmd_sig(Section &m, const Context &ctx) {
  const PiecewiseLinearPath path = load_path(ctx, m.raw("path"));
  const int depth = static_cast<int>(m.integer("depth"));
  if (depth < 0) throw ValidationError("depth must be non-negative");
  const Tensor sig = signature(path, depth);
  Output out;
  out.results["signature"] = tensor_to_json(sig);
  CsvWriter csv({"word", "level", "coefficient"});
  tensor_csv(csv, sig, nullptr);
  out.csv.emplace_back("signature.csv", csv.str());
  return out;
}

Output cmd_develop(Section &m, const Context &ctx) {
  const PiecewiseLinearPath path = load_path(ctx, m.raw("path"));
  const LinearRep rep = load_rep(ctx, m.raw("rep"));
  if (rep.width() != path.width()) throw DimensionError("rep width does not match path width");
  const ComplexMatrix u = develop(path, rep);
  Output out;
  out.results["unitary"] = matrix_to_json(u);
  out.results["unitarity_defect"] = unitarity_defect(u);
  CsvWriter csv({"rep", "row", "col", "re", "im"});
  matrix_csv(csv, 1, u, nullptr);
  out.csv.emplace_back("develop.csv", csv.str());
  return out;
}

PVariationOptions pvar_options(Section &m) {
  PVariationOptions opts;
  opts.beta = m.number("beta", 1.0);
  if (m.has("levels")) opts.levels = m.integers("levels");
  return opts;
}

Output cmd_greedy(Section &m, const Context &ctx) {
  const PiecewiseLinearPath path = load_path(ctx, m.raw("path"));
  const double p = m.number("p", 1.0);
  const double alpha = m.number("alpha", 1.0);
  const PVariationOptions opts = pvar_options(m);
  const GreedyPartition gp = greedy_partition(path, alpha, p, opts);
  Output out;
  out.results["alpha"] = gp.alpha;
  out.results["p"] = gp.p;
  out.results["taus"] = gp.taus;
  out.results["count"] = gp.count;
  out.results["n_p_bound"] = n_p_upper_bound(path, p, opts);
  CsvWriter csv({"j", "tau"});
  for (std::size_t j = 0; j < gp.taus.size(); ++j) csv.cell(static_cast<long long>(j)).cell(gp.taus[j]).end_row();
  out.csv.emplace_back("greedy.csv", csv.str());
  return out;
}

Output cmd_expsig(Section &m, const Context &ctx) {
  const Model model = parse_model(m.sub("model"));
  const std::size_t n_mc = m.count("n_mc", 10000);
  const SignatureEnsemble ens = build(model, ctx.seed, n_mc);
  const ExpSigEstimate est = expected_signature(ens);
  Output out;
  out.results["mean"] = tensor_to_json(est.mean);
  out.results["stderr"] = tensor_to_json(est.stderr_coeff);
  out.results["level_stderr"] = level_array(est.level_stderr);
  out.results["count"] = est.count;
  CsvWriter csv({"word", "level", "mean", "stderr"});
  tensor_csv(csv, est.mean, &est.stderr_coeff);
  out.csv.emplace_back("expsig.csv", csv.str());
  return out;
}

bool within(const ComplexMatrix &mc, const Eigen::MatrixXd &se, const ComplexMatrix &ref) {
  for (Eigen::Index r = 0; r < mc.rows(); ++r) {
    for (Eigen::Index c = 0; c < mc.cols(); ++c) {
      if (std::abs(mc(r, c) - ref(r, c)) > 3.0 * se(r, c) + 1e-12) return false;
    }
  }
  return true;
}

Output cmd_charfn(Section &m, const Context &ctx) {
  const Model model = parse_model(m.sub("model"));
  const std::size_t n_mc = m.count("n_mc", 10000);
  const SignatureEnsemble ens = build(model, ctx.seed, n_mc);
  Output out;
  if (model.lie && m.has("r")) {
    // Comparison with the closed forms, in the eigenbasis of u2.
    const std::vector<double> rs = m.numbers("r");
    const LinearRep rep = example_rep(model.width).conjugated(u2_eigenbasis());
    Json table = Json::array();
    CsvWriter csv({"r", "row", "col", "mc_re", "mc_im", "stderr", "displayed_re", "displayed_im", "exact_re", "exact_im"});
    for (double r : rs) {
      const CharFnEstimate e = char_fn(ens.dilated(r), rep);
      const ComplexMatrix shown = closed_form_phi(*model.lie, r);
      const ComplexMatrix exact = exact_phi(*model.lie, r);
      table.push_back(Json{{"r", r},
                           {"estimate", charfn_json(e)},
                           {"displayed_series", matrix_to_json(shown)},
                           {"exact", matrix_to_json(exact)},
                           {"within_3sigma_displayed", within(e.mean, e.stderr_abs, shown)},
                           {"within_3sigma_exact", within(e.mean, e.stderr_abs, exact)}});
      for (Eigen::Index a = 0; a < 2; ++a) {
        for (Eigen::Index b = 0; b < 2; ++b) {
          csv.cell(r).cell(static_cast<long long>(a + 1)).cell(static_cast<long long>(b + 1));
          csv.cell(e.mean(a, b).real()).cell(e.mean(a, b).imag()).cell(e.stderr_abs(a, b));
          csv.cell(shown(a, b).real()).cell(shown(a, b).imag()).cell(exact(a, b).real()).cell(exact(a, b).imag());
          csv.end_row();
        }
      }
    }
    out.results["closed_form_comparison"] = table;
    out.csv.emplace_back("charfn.csv", csv.str());
    return out;
  }
  const std::vector<LinearRep> reps = load_reps(m, ctx, ens.width());
  Json list = Json::array();
  CsvWriter csv({"rep", "row", "col", "re", "im", "stderr"});
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const CharFnEstimate e = char_fn(ens, reps[i]);
    list.push_back(charfn_json(e));
    matrix_csv(csv, static_cast<long long>(i + 1), e.mean, &e.stderr_abs);
  }
  out.results["estimates"] = list;
  out.csv.emplace_back("charfn.csv", csv.str());
  return out;
}

Output cmd_phicurve(Section &m, const Context &ctx) {
  const Model model = parse_model(m.sub("model"));
  const std::size_t n_mc = m.count("n_mc", 10000);
  const std::vector<double> lambdas = m.numbers("lambdas");
  const SignatureEnsemble ens = build(model, ctx.seed, n_mc);
  const LinearRep rep = load_rep(ctx, m.raw("rep"));
  const PhiCurve curve = phi_lambda_curve(ens, rep, lambdas);
  Output out;
  Json pts = Json::array();
  CsvWriter csv({"lambda", "row", "col", "re", "im", "stderr"});
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    pts.push_back(Json{{"lambda", lambdas[j]}, {"estimate", charfn_json(curve.values[j])}});
    const auto &e = curve.values[j];
    for (Eigen::Index a = 0; a < e.mean.rows(); ++a) {
      for (Eigen::Index b = 0; b < e.mean.cols(); ++b) {
        csv.cell(lambdas[j]).cell(static_cast<long long>(a + 1)).cell(static_cast<long long>(b + 1));
        csv.cell(e.mean(a, b).real()).cell(e.mean(a, b).imag()).cell(e.stderr_abs(a, b)).end_row();
      }
    }
  }
  out.results["curve"] = pts;
  out.results["second_difference"] = curve.second_difference;
  out.results["max_second_difference"] = curve.max_second_difference;
  out.csv.emplace_back("phicurve.csv", csv.str());
  return out;
}

Output cmd_radii(Section &m, const Context &ctx) {
  const Model model = parse_model(m.sub("model"));
  const std::size_t n_mc = m.count("n_mc", 10000);
  const SignatureEnsemble ens = build(model, ctx.seed, n_mc);
  const RadiusDiagnostics rd = radius_diagnostics(ens);
  Output out;
  out.results["seq_r1"] = rd.seq_r1;
  out.results["seq_r1_stderr"] = rd.seq_r1_stderr;
  out.results["seq_r2"] = rd.seq_r2;
  out.results["root_r1"] = rd.root_r1;
  out.results["root_r2"] = rd.root_r2;
  out.results["decay_slope"] = rd.decay_slope;
  out.results["classification"] = rd.classification;
  out.results["jensen_ok"] = rd.jensen_ok;
  CsvWriter csv({"k", "seq_r1", "seq_r1_stderr", "seq_r2", "root_r1", "root_r2"});
  for (std::size_t k = 0; k < rd.seq_r1.size(); ++k) {
    csv.cell(static_cast<long long>(k)).cell(rd.seq_r1[k]).cell(rd.seq_r1_stderr[k]).cell(rd.seq_r2[k]);
    csv.cell(rd.root_r1[k]).cell(rd.root_r2[k]).end_row();
  }
  out.csv.emplace_back("radii.csv", csv.str());
  if (ens.depth() >= 2) {
    const RadiiCheckReport rc = radii_inequality_check(ens);
    Json rows = Json::array();
    for (const auto &r : rc.rows) {
      rows.push_back(Json{{"k", r.k}, {"lhs", r.lhs}, {"lhs_stderr", r.lhs_stderr}, {"rhs", r.rhs},
                          {"rhs_stderr", r.rhs_stderr}, {"violated", r.violated}});
    }
    out.results["radii_inequality"] = Json{{"ok", rc.ok}, {"rows", rows}};
  }
  return out;
}

Output cmd_tails(Section &m, const Context &ctx) {
  const Model model = parse_model(m.sub("model"));
  if (!model.walk) throw ValidationError("tails: model must be random_walk");
  const std::size_t n_mc = m.count("n_mc", 200);
  const double p = m.number("p", 1.0);
  const double alpha = m.number("alpha", 1.0);
  const PVariationOptions opts = pvar_options(m);
  const TailReport tr = tail_diagnostic(sample_random_walk_paths(*model.walk, ctx.seed, n_mc), p, alpha, opts);
  Output out;
  out.results["support"] = tr.support;
  out.results["survival"] = tr.survival;
  out.results["slope"] = std::isfinite(tr.slope) ? Json(tr.slope) : Json("-inf");
  out.results["intercept"] = tr.intercept;
  out.results["r_squared"] = tr.r_squared;
  out.results["fit_points"] = tr.fit_points;
  out.results["label"] = tr.label;
  out.results["interpretation"] = tr.interpretation;
  CsvWriter csv({"value", "survival"});
  for (std::size_t i = 0; i < tr.support.size(); ++i) {
    csv.cell(static_cast<long long>(tr.support[i])).cell(tr.survival[i]).end_row();
  }
  out.csv.emplace_back("tails.csv", csv.str());
  return out;
}

Output cmd_moments(Section &m, const Context &ctx) {
  Section fam = m.sub("family");
  const std::vector<int> steps = fam.integers("steps");
  RandomWalkModelParams base;
  base.law = parse_step_law(fam.text("law", "rademacher"));
  base.width = static_cast<int>(fam.integer("width", 2));
  base.depth = static_cast<int>(fam.integer("depth", 4));
  fam.finish();
  if (steps.size() < 2) throw ValidationError("moments: family needs at least two step counts");
  const std::size_t n_mc = m.count("n_mc", 20000);
  std::vector<LinearRep> reps = m.has("panel") ? load_panel(m.sub("panel"), base.width, ctx.seed)
                                               : random_rep_panel(base.width, 8, ctx.seed);
  std::vector<SignatureEnsemble> family;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] < 1) throw ValidationError("moments: step counts must be positive");
    RandomWalkModelParams p = base;
    p.n_steps = static_cast<std::size_t>(steps[i]);
    family.push_back(random_walk_ensemble(p, sample_seed(ctx.seed, 1 + i), n_mc));
  }
  const MomentsTable table = method_of_moments_experiment(family, reps);
  Output out;
  Json rows = Json::array();
  CsvWriter csv({"n_a", "n_b", "expsig_diff", "distance"});
  for (const auto &r : table.rows) {
    rows.push_back(Json{{"n_a", steps[r.index]}, {"n_b", steps[r.index + 1]}, {"expsig_diff", r.expsig_diff},
                        {"expsig_level_diff", r.expsig_level_diff}, {"distance", r.distance},
                        {"distance_per_rep", r.distance_per_rep}});
    csv.cell(static_cast<long long>(steps[r.index])).cell(static_cast<long long>(steps[r.index + 1]));
    csv.cell(r.expsig_diff).cell(r.distance).end_row();
  }
  out.results["rows"] = rows;
  out.results["distance_decreasing"] = table.distance_decreasing;
  out.csv.emplace_back("moments.csv", csv.str());
  return out;
}

Output cmd_separate(Section &m, const Context &ctx) {
  const Tensor x = load_tensor(ctx, m.raw("tensor"));
  const int retries = static_cast<int>(m.integer("retries", 10));
  const SeparationResult res = separation_search(x, retries, ctx.seed);
  Output out;
  out.results["found"] = res.found;
  out.results["level"] = res.level;
  out.results["m"] = res.m;
  out.results["attempts"] = res.attempts;
  out.results["attempt_norms"] = res.attempt_norms;
  out.results["threshold"] = res.threshold;
  if (res.found) {
    out.results["epsilon"] = res.epsilon;
    out.results["witness_norm"] = res.witness_norm;
    out.results["rep"] = rep_to_json(res.rep->rep());
  } else {
    out.violation = true;
  }
  return out;
}

struct CheckLog {
  Json entries = Json::array();
  bool ok = true;
  void add(const std::string &name, double worst, double tol) {
    const bool pass = worst <= tol;
    ok = ok && pass;
    entries.push_back(Json{{"name", name}, {"worst", worst}, {"tolerance", tol}, {"passed", pass}});
  }
};

Output cmd_check(Section &m, const Context &ctx) {
  std::vector<PiecewiseLinearPath> paths;
  if (m.has("paths")) {
    const Json &arr = m.raw("paths");
    if (!arr.is_array() || arr.empty()) throw ValidationError("check: 'paths' must be a non-empty array");
    for (const auto &p : arr) paths.push_back(load_path(ctx, p));
  }
  if (m.has("model")) {
    const Model model = parse_model(m.sub("model"));
    if (!model.walk) throw ValidationError("check: model must be random_walk");
    for (auto &p : sample_random_walk_paths(*model.walk, ctx.seed, m.count("n_mc", 20))) paths.push_back(std::move(p));
  }
  if (paths.empty()) throw ValidationError("check: 'paths' or 'model' is required");
  const int width = paths.front().width();
  for (const auto &p : paths) {
    if (p.width() != width) throw DimensionError("check: paths differ in width");
  }
  const int depth = static_cast<int>(m.integer("depth", 6));
  if (depth < 1) throw ValidationError("check: depth must be at least 1");

  double tol_chen = 1e-11, tol_group = 1e-10, tol_rev = 1e-10, tol_unit = 1e-10, tol_hom = 1e-12;
  if (m.has("tolerances")) {
    Section t = m.sub("tolerances");
    tol_chen = t.number("chen", tol_chen);
    tol_group = t.number("group_like", tol_group);
    tol_rev = t.number("reversal", tol_rev);
    tol_unit = t.number("unitarity", tol_unit);
    tol_hom = t.number("homomorphism", tol_hom);
    t.finish();
    for (double tol : {tol_chen, tol_group, tol_rev, tol_unit, tol_hom}) {
      if (!(tol >= 0.0)) throw ValidationError("tolerances must be non-negative");
    }
  }
  std::vector<LinearRep> reps;
  if (m.has("rep")) reps.push_back(load_rep(ctx, m.raw("rep")));
  if (reps.empty()) reps = random_rep_panel(width, 3, ctx.seed);

  CheckLog log;
  double chen = 0.0, group = 0.0, decay = 0.0, rev = 0.0, unit = 0.0, hom = 0.0, tail = 0.0;
  for (const auto &p : paths) {
    const Tensor sig = signature(p, depth);
    const double mid = 0.5 * (p.start_time() + p.end_time());
    chen = std::max(chen, max_abs_diff(sig, mul(signature(p, depth, p.start_time(), mid), signature(p, depth, mid, p.end_time()))));
    group = std::max(group, is_group_like(sig, tol_group).worst_residual);
    const double len = p.length();
    for (int k = 1; k <= depth; ++k) {
      const double bound = std::pow(len, k) / std::tgamma(k + 1.0);
      decay = std::max(decay, level_norm(sig, k) - bound * (1.0 + 1e-12));
    }
    rev = std::max(rev, max_abs_diff(signature(reverse(p), depth), antipode(sig)));
    for (const auto &rep : reps) {
      const ComplexMatrix u = develop(p, rep);
      unit = std::max(unit, unitarity_defect(u));
      hom = std::max(hom, max_abs(develop(concatenate(p, p), rep) - u * u));
      const double bound = truncation_tail_bound(rep.norm(), len, depth);
      tail = std::max(tail, operator_norm(u - evaluate_truncated(rep, sig)) - bound * (1.0 + 1e-9) - 1e-12);
    }
  }
  log.add("chen", chen, tol_chen);
  log.add("group_like", group, tol_group);
  log.add("factorial_decay_excess", decay, 0.0);
  log.add("reversal_antipode", rev, tol_rev);
  log.add("unitarity", unit, tol_unit);
  log.add("homomorphism", hom, tol_hom);
  log.add("truncation_tail_excess", tail, 0.0);
  Output out;
  out.results["checks"] = log.entries;
  out.results["paths"] = paths.size();
  out.results["ok"] = log.ok;
  out.violation = !log.ok;
  return out;
}

using Command = std::function<Output(Section &, const Context &)>;

const std::map<std::string, Command> &command_table() {
  static const std::map<std::string, Command> table{
      {"sig", cmd_sig},       {"develop", cmd_develop}, {"greedy", cmd_greedy}, {"expsig", cmd_expsig},
      {"charfn", cmd_charfn}, {"phicurve", cmd_phicurve}, {"radii", cmd_radii}, {"tails", cmd_tails},
      {"moments", cmd_moments}, {"separate", cmd_separate}, {"check", cmd_check}};
  return table;
}


// Top-level manifest keys accepted by each command, checked before anything runs.
void check_keys(const std::string &command, const Json &manifest) {
  static const std::set<std::string> common{"command", "seed", "workers", "name", "description"};
  static const std::map<std::string, std::set<std::string>> allowed{
      {"sig", {"path", "depth"}},
      {"develop", {"path", "rep"}},
      {"greedy", {"path", "p", "alpha", "beta", "levels"}},
      {"expsig", {"model", "n_mc"}},
      {"charfn", {"model", "n_mc", "r", "rep", "panel"}},
      {"phicurve", {"model", "n_mc", "lambdas", "rep"}},
      {"radii", {"model", "n_mc"}},
      {"tails", {"model", "n_mc", "p", "alpha", "beta", "levels"}},
      {"moments", {"family", "panel", "n_mc"}},
      {"separate", {"tensor", "retries"}},
      {"check", {"paths", "model", "n_mc", "depth", "rep", "tolerances"}}};
  if (!manifest.is_object()) throw ValidationError("manifest must be a JSON object");
  const auto &keys = allowed.at(command);
  for (const auto &[key, value] : manifest.items()) {
    if (!common.count(key) && !keys.count(key)) {
      throw ValidationError("manifest: unknown key '" + key + "' for command '" + command + "'");
    }
  }
}

} // namespace

const std::vector<std::string> &commands() {
  static const std::vector<std::string> names{"sig",   "develop", "greedy",  "expsig",   "charfn", "phicurve",
                                              "radii", "tails",   "moments", "separate", "check"};
  return names;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Signatures, unitary developments and characteristic functions of random signatures", "sigchar"};
  std::string command;
  std::string manifest_file;
  std::string out_dir;
  std::optional<std::uint64_t> seed_flag;
  bool quiet = false;
  app.add_option("command", command, "sig|develop|greedy|expsig|charfn|phicurve|radii|tails|moments|separate|check")
      ->required();
  app.add_option("--manifest", manifest_file, "JSON manifest")->required();
  app.add_option("--out", out_dir, "directory for the report and CSV tables (default: report on stdout)");
  app.add_option("--seed", seed_flag, "master seed, overrides the manifest");
  app.add_flag("--quiet", quiet, "no summary on stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "sigchar: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    const auto &table = command_table();
    auto it = table.find(command);
    if (it == table.end()) throw ValidationError("unknown command '" + command + "'");

    const fs::path manifest_path(manifest_file);
    const Json manifest = read_json_file(manifest_path);
    check_keys(command, manifest);
    Section m(manifest, "manifest");
    if (m.has("command") && m.text("command") != command) {
      throw ValidationError("manifest is for command '" + manifest.at("command").get<std::string>() + "'");
    }
    Context ctx;
    ctx.base = manifest_path.has_parent_path() ? manifest_path.parent_path() : fs::path(".");
    if (m.has("seed")) {
      const Json &s = m.raw("seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
        throw ValidationError("manifest: 'seed' must be a non-negative integer");
      }
      ctx.seed = s.get<std::uint64_t>();
    }
    if (seed_flag) ctx.seed = *seed_flag;
    if (m.has("workers")) set_worker_count(static_cast<unsigned>(m.count("workers")));
    m.has("name");
    m.has("description");

    Output result = it->second(m, ctx);
    m.finish();

    Json report{{"schema", kSchema}, {"command", command}, {"seed", ctx.seed}, {"manifest", manifest}};
    report["results"] = result.results;
    const std::string text = report.dump(2) + "\n";
    if (out_dir.empty()) {
      out << text;
    } else {
      std::error_code ec;
      fs::create_directories(out_dir, ec);
      if (ec) throw ValidationError("cannot create output directory '" + out_dir + "'");
      write_text_file(fs::path(out_dir) / (command + ".json"), text);
      for (const auto &[name, csv] : result.csv) write_text_file(fs::path(out_dir) / name, csv);
      if (!quiet) out << "sigchar " << command << ": report written to " << (fs::path(out_dir) / (command + ".json")).string() << "\n";
    }
    if (result.violation) {
      err << "sigchar " << command << ": check failed\n";
      return kExitNumeric;
    }
    return kExitOk;
  } catch (const NumericError &e) {
    err << "sigchar: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DimensionError &e) {
    err << "sigchar: dimension mismatch: " << e.what() << "\n";
    return kExitValidation;
  } catch (const RangeError &e) {
    err << "sigchar: out of range: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError &e) {
    err << "sigchar: invalid argument: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError &e) {
    err << "sigchar: invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Json::exception &e) {
    err << "sigchar: invalid input: " << e.what() << "\n";
    return kExitValidation;
  }
}

} // namespace sigchar::cli
