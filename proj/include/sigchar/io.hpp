#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigchar/path.hpp"
#include "sigchar/tensor.hpp"
#include "sigchar/unitary.hpp"

namespace sigchar {

using Json = nlohmann::ordered_json;

// {"width": d, "depth": n, "levels": [[x0], [x1...], ...]}. Doubles are
// written in shortest round-trip form, so reading back is bit-exact.
Json tensor_to_json(const Tensor &x);
Tensor tensor_from_json(const Json &j);

// {"width": d, "times": [...], "points": [[x1..xd], ...]}.
Json path_to_json(const PiecewiseLinearPath &p);
PiecewiseLinearPath path_from_json(const Json &j);

// CSV with header t,x1,...,xd.
std::string path_to_csv(const PiecewiseLinearPath &p);
PiecewiseLinearPath path_from_csv(const std::string &text);

// Matrix as rows of [re, im] pairs.
Json matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const Json &j);

// {"width": d, "dim": h, "generators": [matrix, ...]}. Validates the
// anti-Hermitian invariant, and sp(m) membership when requested.
Json rep_to_json(const LinearRep &rep);
LinearRep rep_from_json(const Json &j, bool require_symplectic = false);

std::string read_text_file(const std::filesystem::path &file);
void write_text_file(const std::filesystem::path &file, const std::string &text);
Json read_json_file(const std::filesystem::path &file);

// CSV text builder; doubles are printed in shortest round-trip form.
class CsvWriter {
public:
  explicit CsvWriter(const std::vector<std::string> &header);
  CsvWriter &cell(const std::string &s);
  CsvWriter &cell(double v);
  CsvWriter &cell(long long v);
  void end_row();
  const std::string &str() const noexcept { return text_; }

private:
  std::string text_;
  bool row_open_ = false;
};

} // namespace sigchar
