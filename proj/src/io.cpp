#include "sigchar/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sigchar/errors.hpp"

namespace sigchar {

namespace {

void require_keys(const Json &j, std::initializer_list<const char *> keys, const char *what) {
  if (!j.is_object()) throw ValidationError(std::string(what) + " must be a JSON object");
  for (const auto &[k, v] : j.items()) {
    bool known = false;
    for (const char *key : keys) known = known || k == key;
    if (!known) throw ValidationError(std::string(what) + ": unknown field '" + k + "'");
  }
  for (const char *key : keys) {
    if (!j.contains(key)) throw ValidationError(std::string(what) + ": missing field '" + key + "'");
  }
}

int get_int(const Json &j, const char *key, const char *what) {
  const Json &v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError(std::string(what) + ": '" + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> get_doubles(const Json &v, const char *what) {
  if (!v.is_array()) throw ValidationError(std::string(what) + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto &e : v) {
    if (!e.is_number()) throw ValidationError(std::string(what) + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

} // namespace

Json tensor_to_json(const Tensor &x) {
  Json levels = Json::array();
  for (int k = 0; k <= x.depth(); ++k) {
    auto lvl = x.level(k);
    levels.push_back(std::vector<double>(lvl.begin(), lvl.end()));
  }
  return Json{{"width", x.width()}, {"depth", x.depth()}, {"levels", levels}};
}

Tensor tensor_from_json(const Json &j) {
  require_keys(j, {"width", "depth", "levels"}, "tensor");
  const int width = get_int(j, "width", "tensor");
  const int depth = get_int(j, "depth", "tensor");
  const Json &lv = j.at("levels");
  if (!lv.is_array() || lv.size() != static_cast<std::size_t>(depth) + 1) {
    throw ValidationError("tensor: 'levels' must hold depth + 1 arrays");
  }
  std::vector<std::vector<double>> levels;
  for (const auto &l : lv) levels.push_back(get_doubles(l, "tensor level"));
  return Tensor::from_levels(width, levels);
}

Json path_to_json(const PiecewiseLinearPath &p) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < p.num_points(); ++i) {
    auto x = p.point(i);
    pts.push_back(std::vector<double>(x.begin(), x.end()));
  }
  return Json{{"width", p.width()}, {"times", p.times()}, {"points", pts}};
}

PiecewiseLinearPath path_from_json(const Json &j) {
  require_keys(j, {"width", "times", "points"}, "path");
  const int width = get_int(j, "width", "path");
  std::vector<double> times = get_doubles(j.at("times"), "path times");
  const Json &pts = j.at("points");
  if (!pts.is_array() || pts.size() != times.size()) throw ValidationError("path: one point per time required");
  std::vector<double> flat;
  for (const auto &row : pts) {
    std::vector<double> r = get_doubles(row, "path point");
    if (r.size() != static_cast<std::size_t>(width)) throw DimensionError("path: point does not have 'width' coordinates");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return PiecewiseLinearPath(width, std::move(times), std::move(flat));
}

std::string path_to_csv(const PiecewiseLinearPath &p) {
  std::vector<std::string> header{"t"};
  for (int i = 1; i <= p.width(); ++i) header.push_back("x" + std::to_string(i));
  CsvWriter csv(header);
  for (std::size_t r = 0; r < p.num_points(); ++r) {
    csv.cell(p.times()[r]);
    for (double v : p.point(r)) csv.cell(v);
    csv.end_row();
  }
  return csv.str();
}

PiecewiseLinearPath path_from_csv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("path CSV is empty");
  int columns = 1;
  for (char c : line) columns += (c == ',');
  if (line.rfind("t,", 0) != 0 || columns < 2) throw ValidationError("path CSV header must be t,x1,...,xd");
  const int width = columns - 1;
  std::vector<double> times, pts;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string cell;
    int col = 0;
    while (std::getline(row, cell, ',')) {
      double v = 0.0;
      const char *b = cell.data();
      const char *e = b + cell.size();
      while (e > b && (e[-1] == '\r' || e[-1] == ' ')) --e;
      while (b < e && *b == ' ') ++b;
      auto res = std::from_chars(b, e, v);
      if (res.ec != std::errc() || res.ptr != e) {
        throw ValidationError("path CSV line " + std::to_string(lineno) + ": '" + cell + "' is not a number");
      }
      (col == 0 ? times : pts).push_back(v);
      ++col;
    }
    if (col != columns) throw ValidationError("path CSV line " + std::to_string(lineno) + " has the wrong column count");
  }
  return PiecewiseLinearPath(width, std::move(times), std::move(pts));
}

Json matrix_to_json(const ComplexMatrix &m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json &j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  const auto m = static_cast<Eigen::Index>(j.front().is_array() ? j.front().size() : 0);
  ComplexMatrix out(n, m);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Json &row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m) throw ValidationError("matrix rows differ in length");
    for (Eigen::Index c = 0; c < m; ++c) {
      const std::vector<double> z = get_doubles(row[static_cast<std::size_t>(c)], "matrix entry");
      if (z.size() != 2) throw ValidationError("matrix entry must be [re, im]");
      out(r, c) = Complex(z[0], z[1]);
    }
  }
  return out;
}

Json rep_to_json(const LinearRep &rep) {
  Json gens = Json::array();
  for (const auto &a : rep.generators()) gens.push_back(matrix_to_json(a));
  return Json{{"width", rep.width()}, {"dim", rep.dim()}, {"generators", gens}};
}

LinearRep rep_from_json(const Json &j, bool require_symplectic) {
  require_keys(j, {"width", "dim", "generators"}, "rep");
  const int width = get_int(j, "width", "rep");
  const int dim = get_int(j, "dim", "rep");
  const Json &g = j.at("generators");
  if (!g.is_array() || g.size() != static_cast<std::size_t>(width)) throw DimensionError("rep: expected 'width' generators");
  std::vector<ComplexMatrix> gens;
  for (const auto &m : g) {
    ComplexMatrix a = matrix_from_json(m);
    if (a.rows() != dim || a.cols() != dim) throw DimensionError("rep: generator is not dim x dim");
    gens.push_back(std::move(a));
  }
  LinearRep rep(std::move(gens), 1e-10);
  if (require_symplectic) SymplecticRep check(rep);
  return rep;
}

std::string read_text_file(const std::filesystem::path &file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + file.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path &file, const std::string &text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + file.string() + "'");
  out << text;
  if (!out) throw ValidationError("write to '" + file.string() + "' failed");
}

Json read_json_file(const std::filesystem::path &file) {
  const std::string text = read_text_file(file);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw ValidationError("'" + file.string() + "' is not valid JSON: " + e.what());
  }
}

CsvWriter::CsvWriter(const std::vector<std::string> &header) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

CsvWriter &CsvWriter::cell(const std::string &s) {
  if (row_open_) text_ += ',';
  text_ += s;
  row_open_ = true;
  return *this;
}

CsvWriter &CsvWriter::cell(double v) { return cell(format_double(v)); }

CsvWriter &CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

void CsvWriter::end_row() {
  text_ += '\n';
  row_open_ = false;
}

} // namespace sigchar
