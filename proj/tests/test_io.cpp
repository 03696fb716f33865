#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "oracle.hpp"
#include "sigchar/errors.hpp"
#include "sigchar/io.hpp"
#include "sigchar/statistics.hpp"

using namespace sigchar;
namespace fs = std::filesystem;

TEST_CASE("tensor JSON round trip is bit-exact") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const Tensor x = oracle::random_tensor(rng, 1 + t % 3, t % 5, 1.0 / 3.0);
    const Json j = Json::parse(tensor_to_json(x).dump());
    CHECK(tensor_from_json(j) == x);
  }
  const Json l = tensor_to_json(Tensor::word(2, 2, parse_word("12")));
  CHECK(l.dump() == R"({"width":2,"depth":2,"levels":[[0.0],[0.0,0.0],[0.0,1.0,0.0,0.0]]})");
}

TEST_CASE("tensor JSON validation") {
  CHECK_THROWS_AS(tensor_from_json(Json::parse(R"({"width":2,"depth":1})")), ValidationError);
  CHECK_THROWS_AS(tensor_from_json(Json::parse(R"({"width":2,"depth":1,"levels":[[1],[0,0]],"x":1})")), ValidationError);
  CHECK_THROWS_AS(tensor_from_json(Json::parse(R"({"width":2,"depth":1,"levels":[[1]]})")), ValidationError);
  CHECK_THROWS_AS(tensor_from_json(Json::parse(R"({"width":2,"depth":1,"levels":[[1],[0,"a"]]})")), ValidationError);
  CHECK_THROWS_AS(tensor_from_json(Json::parse(R"({"width":2,"depth":1,"levels":[[1],[0,0,0]]})")), DimensionError);
  CHECK_THROWS_AS(tensor_from_json(Json::parse(R"({"width":2.5,"depth":1,"levels":[[1],[0,0]]})")), ValidationError);
}

TEST_CASE("path JSON and CSV") {
  const PiecewiseLinearPath p(2, {0.0, 0.1, 0.35}, {0.0, 0.0, 1.0 / 3.0, -2.0, 1e-300, 7.0});
  CHECK(path_from_json(Json::parse(path_to_json(p).dump())) == p);
  const std::string csv = path_to_csv(p);
  CHECK(csv.rfind("t,x1,x2\n", 0) == 0);
  CHECK(path_from_csv(csv) == p);
  CHECK(path_from_csv("t,x1\n0,0\n1,2.5\n") == PiecewiseLinearPath(1, {0.0, 1.0}, {0.0, 2.5}));
  CHECK_THROWS_AS(path_from_csv(""), ValidationError);
  CHECK_THROWS_AS(path_from_csv("x,y\n0,0\n"), ValidationError);
  CHECK_THROWS_AS(path_from_csv("t,x1\n0,abc\n"), ValidationError);
  CHECK_THROWS_AS(path_from_csv("t,x1\n0,1,2\n"), ValidationError);
  CHECK_THROWS_AS(path_from_csv("t,x1\n1,0\n0,1\n"), ValidationError);
  CHECK_THROWS_AS(path_from_json(Json::parse(R"({"width":2,"times":[0,1],"points":[[0,0]]})")), ValidationError);
  CHECK_THROWS_AS(path_from_json(Json::parse(R"({"width":2,"times":[0,1],"points":[[0,0],[1]]})")), DimensionError);
}

TEST_CASE("matrix and rep JSON") {
  const auto panel = random_rep_panel(3, 2, 5, {2, 4});
  for (const auto &rep : panel) {
    const LinearRep back = rep_from_json(Json::parse(rep_to_json(rep).dump()));
    REQUIRE(back.width() == rep.width());
    for (int i = 0; i < rep.width(); ++i) CHECK(back.generator(i) == rep.generator(i));
  }
  const Json su2 = rep_to_json(LinearRep({su2_basis()[0], su2_basis()[1]}));
  CHECK(su2["dim"] == 2);
  CHECK_NOTHROW(rep_from_json(su2, true));
  CHECK_THROWS_AS(rep_from_json(rep_to_json(panel[0]), true), DomainError);
  CHECK_THROWS_AS(rep_from_json(Json::parse(R"({"width":1,"dim":1,"generators":[[[[1,0]]]]})")), DomainError);
  CHECK_THROWS_AS(rep_from_json(Json::parse(R"({"width":2,"dim":1,"generators":[[[[0,1]]]]})")), DimensionError);
  CHECK_THROWS_AS(rep_from_json(Json::parse(R"({"width":1,"dim":2,"generators":[[[[0,1]]]]})")), DimensionError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"([[[0,1],[0]]])")), ValidationError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"([])")), ValidationError);
  const Json m = matrix_to_json(su2_basis()[2]);
  CHECK(m.dump() == "[[[0.0,0.5],[0.0,0.0]],[[0.0,0.0],[-0.0,-0.5]]]");
}

TEST_CASE("files and CSV writer") {
  const fs::path dir = fs::temp_directory_path() / "sigchar_test_io";
  fs::create_directories(dir);
  write_text_file(dir / "a.json", R"({"k": [1, 2]})");
  CHECK(read_json_file(dir / "a.json")["k"][1] == 2);
  write_text_file(dir / "bad.json", "{not json");
  CHECK_THROWS_AS(read_json_file(dir / "bad.json"), ValidationError);
  CHECK_THROWS_AS(read_text_file(dir / "missing.txt"), ValidationError);
  fs::remove_all(dir);

  CsvWriter w({"k", "value", "label"});
  w.cell(3LL).cell(0.1).cell("x");
  w.end_row();
  w.cell(4LL).cell(1e-300).cell("y");
  w.end_row();
  CHECK(w.str() == "k,value,label\n3,0.1,x\n4,1e-300,y\n");
}
