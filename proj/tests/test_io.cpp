#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "cfol/io.hpp"
#include "cfol/verify.hpp"

using namespace cfol;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cfol_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("signed permutation systems round-trip losslessly") {
  for (auto [m, k, j] : {std::tuple{1, 2, 0}, {4, 3, 1}, {8, 1, 0}, {9, 1, 0}}) {
    const auto c = build_system(m, k, j);
    const json doc = system_to_json(c);
    CHECK(doc.at("encoding") == "signed_perm");
    CHECK(doc.at("provenance").at("flips") == j);
    const auto back = system_from_json(json::parse(doc.dump()));
    REQUIRE(back.exact());
    CHECK(back.perm_generators() == c.perm_generators());
    CHECK(back.provenance() == c.provenance());
    CHECK(equivalence_profile(back) == equivalence_profile(c));
    CHECK(system_to_json(back).dump() == doc.dump());
  }
}

TEST_CASE("dense systems round-trip") {
  Sampler s(3);
  const auto base = build_system(2, 2, 0);
  const auto c = conjugate_system(base, haar_orthogonal(base.dim(), s));
  const json doc = system_to_json(c);
  CHECK(doc.at("encoding") == "dense");
  CHECK(doc.at("generators")[0].size() == static_cast<std::size_t>(c.dim() * c.dim()));
  const auto back = system_from_json(json::parse(doc.dump()));
  CHECK_FALSE(back.exact());
  for (int i = 0; i < c.count(); ++i) CHECK(max_abs(back.dense(i) - c.dense(i)) == 0.0);
}

TEST_CASE("signed permutation encoding layout") {
  const auto c = build_system(1, 2, 0);
  const json doc = system_to_json(c);
  CHECK(doc.at("m") == 1);
  CHECK(doc.at("l") == 2);
  // P_1 swaps the halves: column 0 -> row 2 with sign +1
  CHECK(doc.at("generators")[1][0] == json::array({2, 1}));
  CHECK(doc.at("generators")[0][3] == json::array({3, -1}));
}

TEST_CASE("malformed system files") {
  const json good = system_to_json(build_system(2, 1, 0));
  CHECK_THROWS_AS(system_from_json(json::object()), std::invalid_argument);
  json a = good;
  a["encoding"] = "sparse";
  CHECK_THROWS_AS(system_from_json(a), std::invalid_argument);
  json b = good;
  b["generators"].erase(0);
  CHECK_THROWS_AS(system_from_json(b), std::invalid_argument);
  json c = good;
  c["generators"][0][0] = json::array({0, 2});
  CHECK_THROWS_AS(system_from_json(c), std::invalid_argument);
  json d = good;
  d["generators"][0][0] = json::array({1, 1});  // repeated row
  CHECK_THROWS_AS(system_from_json(d), std::invalid_argument);
  json e = good;
  e["m"] = "two";
  CHECK_THROWS_AS(system_from_json(e), std::invalid_argument);
  json f = good;
  f["l"] = 0;
  CHECK_THROWS_AS(system_from_json(f), std::invalid_argument);
  CHECK_THROWS_AS(system_from_json(system_to_json(build_system(6, 2, 0)), 16), std::length_error);
  json g = system_to_json(conjugate_system(build_system(2, 1, 0), Mat::Identity(4, 4)));
  g["generators"][1].erase(0);
  CHECK_THROWS_AS(system_from_json(g), std::invalid_argument);
  json h = system_to_json(conjugate_system(build_system(2, 1, 0), Mat::Identity(4, 4)));
  h["generators"][1][0] = "x";
  CHECK_THROWS_AS(system_from_json(h), std::invalid_argument);
}

TEST_CASE("report JSON") {
  VerificationReport r;
  r.suite = "relations";
  r.seed = 7;
  r.samples = 3;
  r.system = EquivalenceProfile{4, 2, 0};
  r.add("symmetry", "each generator is symmetric", 0.0, 0.0);
  r.add("broken", "always fails", std::nan(""), 1.0);
  const json j = report_to_json(r);
  CHECK(j.at("suite") == "relations");
  CHECK(j.at("seed") == 7);
  CHECK(j.at("samples") == 3);
  CHECK(j.at("pass") == false);
  REQUIRE(j.at("checks").size() == 2);
  const auto& c0 = j.at("checks")[0];
  CHECK(c0.at("name") == "symmetry");
  CHECK(c0.at("paper_ref") == "each generator is symmetric");
  CHECK(c0.at("violation") == 0.0);
  CHECK(c0.at("tol") == 0.0);
  CHECK(c0.at("pass") == true);
  CHECK(j.at("checks")[1].at("violation").is_null());
  CHECK(j.at("checks")[1].at("pass") == false);
  CHECK(j.at("system") == json({{"m", 4}, {"k", 2}, {"kappa", 0}}));
  CHECK_FALSE(j.contains("wall_seconds"));
  VerificationReport none;
  none.suite = "x";
  CHECK(report_to_json(none).at("system").is_null());
  r.system = EquivalenceProfile{3, 2, std::nullopt};
  CHECK(report_to_json(r).at("system").at("kappa").is_null());
}

TEST_CASE("atomic writes") {
  const fs::path p = scratch("out.json");
  write_file_atomic(p.string(), "first\n");
  CHECK(read_text_file(p.string()) == "first\n");
  write_file_atomic(p.string(), "second\n");
  CHECK(read_text_file(p.string()) == "second\n");
  CHECK_FALSE(fs::exists(p.string() + ".tmp"));
  CHECK_THROWS(read_text_file((scratch("missing") / "nope").string()));
  CHECK_THROWS(write_file_atomic((scratch("missing_dir") / "a" / "b").string(), "x"));
  fs::remove_all(p.parent_path());
}
