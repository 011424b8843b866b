#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cfol/clifford.hpp"
#include "cfol/io.hpp"

using namespace cfol;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "cfol_test_cli";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args, const std::string& env = "") {
  const fs::path out = work_dir() / "stdout.txt", err = work_dir() / "stderr.txt";
  const std::string cmd = env + " \"" CFOL_BIN "\" " + args + " > \"" + out.string() + "\" 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string golden(const std::string& name) { return slurp(fs::path(GOLDEN_DIR) / name); }

}  // namespace

TEST_CASE("construct") {
  const fs::path p = work_dir() / "c12.json";
  const auto r = run("construct --m 1 --k 2 --out " + p.string());
  CHECK(r.code == 0);
  CHECK(r.err.find("(1,2,-)") != std::string::npos);
  CHECK(slurp(p) == golden("construct_1_2.json"));
  const auto sys = system_from_json(json::parse(slurp(p)));
  CHECK(sys.perm_generators() == build_system(1, 2, 0).perm_generators());

  const fs::path d = work_dir() / "c22_dense.json";
  CHECK(run("construct --m 2 --k 2 --flips 1 --encoding dense --out " + d.string()).code == 0);
  const auto dense = system_from_json(json::parse(slurp(d)));
  CHECK_FALSE(dense.exact());
  CHECK(verify_relations(dense).pass);

  const auto bad = run("construct --m 1 --k 1 --out -");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("(1,1)") != std::string::npos);
  CHECK(run("construct --k 2 --out -").code == 2);
  CHECK(run("construct --m 2 --k 2 --flips 5 --out -").code == 2);
}

TEST_CASE("verify") {
  const fs::path rep = work_dir() / "rel.json";
  const auto r = run("verify --system 2,2,0 --suite relations --report " + rep.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS relations.symmetry") != std::string::npos);
  CHECK(slurp(rep) == golden("relations_2_2.json"));

  // a system file works the same as the m,k,flips shorthand
  const fs::path sysfile = work_dir() / "s.json";
  CHECK(run("construct --m 2 --k 2 --out " + sysfile.string()).code == 0);
  const fs::path rep2 = work_dir() / "rel2.json";
  CHECK(run("verify --system " + sysfile.string() + " --suite relations --report " + rep2.string()).code == 0);
  CHECK(slurp(rep2) == slurp(rep));

  const auto inc = run("verify --system 4,2,0 --suite sphere_quotient");
  CHECK(inc.code == 2);
  CHECK(inc.err.find("incompatible") != std::string::npos);
  CHECK(run("verify --system 2,2,0 --suite nope").code == 2);
  CHECK(run("verify --system 1,1,0 --suite relations").code == 2);
  CHECK(run("verify --system /nonexistent.json --suite relations").code == 2);

  const fs::path all1 = work_dir() / "all1.json", all2 = work_dir() / "all2.json";
  const auto a = run("verify --system 2,2,0 --suite all --samples 50 --budget 30 --seed 4 --report " + all1.string());
  CHECK(a.code == 0);
  CHECK(a.out.find("FAIL") == std::string::npos);
  CHECK(run("verify --system 2,2,0 --suite all --samples 50 --budget 30 --seed 4 --report " + all2.string()).code == 0);
  CHECK(slurp(all1) == slurp(all2));
  const json doc = json::parse(slurp(all1));
  CHECK(doc.at("pass") == true);
  CHECK(doc.at("reports").size() >= 10);

  // a failing tolerance exits 1
  const fs::path broken = work_dir() / "broken.json";
  json bj = system_to_json(build_system(2, 1, 0));
  bj["generators"][1] = bj["generators"][0];
  { std::ofstream(broken) << bj.dump(); }
  const auto f = run("verify --system " + broken.string() + " --suite relations");
  CHECK(f.code == 1);
  CHECK(f.out.find("FAIL relations.anticommutation") != std::string::npos);
}

TEST_CASE("dimension cap") {
  CHECK(run("construct --m 12 --k 5 --out -").code == 2);
  const auto big = run("construct --m 12 --k 5 --out -", "CFL_MAX_DIM=1024");
  CHECK(big.code == 0);
  CHECK(json::parse(big.out).at("l") == 320);
  CHECK(run("construct --m 3 --k 4 --out -", "CFL_MAX_DIM=16").code == 2);
}

TEST_CASE("fiber") {
  const fs::path p = work_dir() / "fiber.csv";
  CHECK(run("fiber --system 2,2,0 --at 0.3,0,0.4 --n 3 --seed 5 --out " + p.string()).code == 0);
  const std::string csv = slurp(p);
  CHECK(csv == golden("fiber_2_2.csv"));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x0,x1,x2,x3,x4,x5,x6,x7,pi0,pi1,pi2");
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<double> vals;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 11);
    CHECK(vals[8] == doctest::Approx(0.3));
    CHECK(std::abs(vals[9]) < 1e-12);
    CHECK(vals[10] == doctest::Approx(0.4));
    ++rows;
  }
  CHECK(rows == 3);
  const auto origin = run("fiber --system 2,2,0 --at 0 --n 2");
  CHECK(origin.code == 0);
  CHECK(run("fiber --system 2,2,0 --at 0.9,0.9,0 --n 2").code == 2);
  CHECK(run("fiber --system 2,2,0 --at 0.1,0.1 --n 2").code == 2);
}

TEST_CASE("invariant, classify and homogeneity") {
  const auto inv = run("invariant 4,3,1");
  CHECK(inv.code == 0);
  CHECK(inv.out == "trace_invariant 1\nprofile (4,3,1)\n");
  const auto cls = run("classify 4,3,0 4,3,1");
  CHECK(cls.code == 0);
  CHECK(cls.out == golden("classify_4_3.txt"));
  CHECK(run("classify 4,3,1 4,3,2").out.rfind("equivalent", 0) == 0);
  CHECK(run("homogeneity --system 4,2,1").out == golden("homogeneity_4_2_1.txt"));
  CHECK(run("homogeneity --m 2 --k 3").out == golden("homogeneity_2_3.txt"));
  CHECK(run("homogeneity --m 4 --k 2").out.rfind("conditionally(", 0) == 0);
  CHECK(run("homogeneity --m 3 --k 1").code == 2);
}

TEST_CASE("compose") {
  const auto r = run("compose --system 2,2,0 --foliation points --x-at 0 --y-at 1,0,0 --seed 2");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.dump().find("0.785398") != std::string::npos);
  CHECK(run("compose --system 2,2,0 --foliation nope --x-at 0").code == 2);
}

TEST_CASE("usage errors") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
}
